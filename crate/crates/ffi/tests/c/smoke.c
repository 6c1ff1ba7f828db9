#include <stdio.h>
#include <string.h>

#include "octanomial.h"

static int check(OctStatus s, const char *what) {
    if (s != OCT_STATUS_OK) {
        fprintf(stderr, "%s: %d %s\n", what, (int)s, oct_last_error());
        return 1;
    }
    return 0;
}

int main(void) {
    OctField *k = NULL;
    if (check(oct_field_new("Fp:13", &k), "field")) return 1;

    const char *a[4] = {"0", "0", "0", "0"};
    OctSurface *x = NULL;
    if (check(oct_surface_octanomial(k, a, &x), "surface")) return 1;

    bool smooth = false;
    size_t lines = 0, eck = 0;
    if (check(oct_surface_is_smooth(x, &smooth), "smooth")) return 1;
    if (check(oct_surface_line_count(x, &lines), "lines")) return 1;
    if (check(oct_surface_eckardt_count(x, &eck), "eckardt")) return 1;
    printf("smooth=%d lines=%zu eckardt=%zu\n", (int)smooth, lines, eck);

    OctField *bad = NULL;
    OctStatus s = oct_field_new("Fp:12", &bad);
    printf("bad=%d\n", (int)s);

    const char *argv[4] = {"octanomial", "lattice", "--enumerate", "trios"};
    char *out = NULL;
    int code = oct_run(4, argv, &out);
    printf("run=%d trios=%d\n", code, strstr(out, "\"count\": 45") != NULL);
    oct_string_free(out);

    oct_surface_free(x);
    oct_field_free(k);
    return 0;
}
