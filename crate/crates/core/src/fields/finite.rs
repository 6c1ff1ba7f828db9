//! Prime fields and F_{p^k} as F_p[t]/(m(t)).
//!
//! Elements of F_{p^k} are packed as the integer `c0 + c1 p + ... + c_{k-1} p^{k-1}`.
//! Small fields get exp/log tables; larger ones multiply polynomials directly.

const TABLE_LIMIT: u64 = 1 << 20;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[inline]
pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    if t < 0 {
        t += p as i128;
    }
    t as u64
}

// ---- dense polynomials over F_p, lowest degree first ----

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let j = top - dm + i;
                r[j] = (r[j] + p - c * mi % p) % p;
            }
        }
        r.pop();
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, m, p)
}

fn fp_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = fp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = fp_mulmod(&result, &b, m, p);
        }
        b = fp_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(&mut out);
    out
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub(crate) fn fp_is_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^{p^i} mod m for i = 0..=k
    let mut frob = vec![fp_rem(&x, m, p)];
    for i in 1..=k {
        let prev = frob[i - 1].clone();
        frob.push(fp_powmod(&prev, p, m, p));
    }
    if !fp_sub(&frob[k], &x, p).is_empty() {
        return false;
    }
    for r in prime_factors(k as u64) {
        let d = k / r as usize;
        let g = fp_gcd(m, &fp_sub(&frob[d], &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lowest monic irreducible of degree k, ordered by packed coefficient value.
pub(crate) fn default_modulus(p: u64, k: usize) -> Vec<u64> {
    let count = p.checked_pow(k as u32).expect("field too large");
    for v in 0..count {
        let mut m = Vec::with_capacity(k + 1);
        let mut x = v;
        for _ in 0..k {
            m.push(x % p);
            x /= p;
        }
        m.push(1);
        if m[0] != 0 && fp_is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub(crate) struct ExtField {
    pub p: u64,
    pub k: usize,
    pub q: u64,
    pub modulus: Vec<u64>,
    pw: Vec<u64>,
    tables: Option<Tables>,
}

impl ExtField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        let k = modulus.len() - 1;
        let mut pw = Vec::with_capacity(k + 1);
        let mut acc = 1u64;
        for _ in 0..=k {
            pw.push(acc);
            acc = acc.saturating_mul(p);
        }
        let q = pw[k];
        let mut f = ExtField {
            p,
            k,
            q,
            modulus,
            pw,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            f.tables = Some(f.build_tables());
        }
        f
    }

    fn build_tables(&self) -> Tables {
        let n = self.q - 1;
        let factors = prime_factors(n);
        let g = (1..self.q)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, n / r) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u64;
        for i in 0..n as usize {
            exp[i] = x as u32;
            exp[i + n as usize] = x as u32;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, g);
        }
        Tables { exp, log }
    }

    pub fn digits(&self, mut a: u64) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    pub fn pack(&self, d: &[u64]) -> u64 {
        d.iter()
            .enumerate()
            .map(|(i, &c)| (c % self.p) * self.pw[i])
            .sum()
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut r = 0;
        for i in 0..self.k {
            let s = a % self.p + b % self.p;
            r += if s >= self.p { s - self.p } else { s } * self.pw[i];
            a /= self.p;
            b /= self.p;
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut r = 0;
        for i in 0..self.k {
            let d = a % self.p;
            if d != 0 {
                r += (self.p - d) * self.pw[i];
            }
            a /= self.p;
        }
        r
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as u64,
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let da = self.digits(a);
        let db = self.digits(b);
        self.pack(&fp_mulmod(&da, &db, &self.modulus, self.p))
    }

    fn pow_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => {
                let n = (self.q - 1) as u32;
                let l = t.log[a as usize];
                Some(t.exp[((n - l) % n) as usize] as u64)
            }
            None => Some(self.pow_slow(a, self.q - 2)),
        }
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let n = self.q - 1;
                let l = t.log[a as usize] as u64;
                t.exp[((l as u128 * (e % n) as u128) % n as u128) as usize] as u64
            }
            None => self.pow_slow(a, e),
        }
    }
}
