//! Dense polynomials over the prime field GF(p), used only to validate and
//! search for field moduli. Coefficients are stored constant term first.

pub(crate) type Poly = Vec<u32>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // Fermat; p is prime and a != 0
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

pub(crate) fn rem(a: &[u32], f: &[u32], p: u32) -> Poly {
    let f = trim(f.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod_p(f[df], p) as u64;
    let mut r = trim(a.to_vec());
    let p64 = p as u64;
    while r.len() > df {
        let dr = r.len() - 1;
        let factor = r[dr] as u64 * lead_inv % p64;
        let shift = dr - df;
        for (i, &fc) in f.iter().enumerate() {
            let sub = factor * fc as u64 % p64;
            r[shift + i] = ((r[shift + i] as u64 + p64 - sub) % p64) as u32;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai as u64 * bj as u64) % p64;
        }
    }
    let out: Poly = out.into_iter().map(|c| c as u32).collect();
    rem(&out, f, p)
}

pub(crate) fn pow_mod(a: &[u32], mut e: u64, f: &[u32], p: u32) -> Poly {
    let mut base = rem(a, f, p);
    let mut acc = rem(&[1], f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &base, f, p);
        }
        base = mul_mod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// Rabin's irreducibility test for a monic `f` of degree `n >= 1`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    // frob[i] = x^(p^i) mod f
    let mut frob = Vec::with_capacity(n + 1);
    frob.push(rem(&x, f, p));
    for i in 1..=n {
        let next = pow_mod(&frob[i - 1], p as u64, f, p);
        frob.push(next);
    }
    if frob[n] != rem(&x, f, p) {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|r| {
        let h = sub(&frob[n / r as usize], &x, p);
        gcd(&h, f, p).len() == 1
    })
}

/// Smallest-degree monic factor found by trial division, in ascending
/// base-p order within each degree.
pub(crate) fn smallest_factor(f: &[u32], p: u32) -> Option<Poly> {
    let n = f.len() - 1;
    for deg in 1..=n / 2 {
        let count = (p as u64).pow(deg as u32);
        for low in 0..count {
            let mut cand = digits(low, p, deg);
            cand.push(1);
            if rem(f, &cand, p).is_empty() {
                return Some(cand);
            }
        }
    }
    None
}

pub(crate) fn digits(mut v: u64, p: u32, len: usize) -> Poly {
    (0..len)
        .map(|_| {
            let d = (v % p as u64) as u32;
            v /= p as u64;
            d
        })
        .collect()
}

pub(crate) fn to_code(coeffs: &[u32], p: u32) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0u64, |acc, &c| acc * p as u64 + c as u64)
}

pub(crate) fn to_string(f: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        parts.push(match (c, mono.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => mono,
            (_, false) => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Lexicographically smallest monic irreducible of degree `n`, comparing the
/// non-leading coefficients as a base-p integer with the constant term as the
/// least significant digit.
pub(crate) fn smallest_irreducible(p: u32, n: usize) -> Poly {
    let count = (p as u64).pow(n as u32);
    for low in 0..count {
        let mut f = digits(low, p, n);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
