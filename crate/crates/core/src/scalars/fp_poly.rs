//! Dense univariate polynomials over a prime field `F_p`, stored as
//! little-endian coefficient vectors with no trailing zeros. Used to model
//! extension fields and to test moduli for irreducibility.

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let mut out: Vec<u64> = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
            }
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = inv_mod(lead, p);
        for c in &mut x {
            *c = *c * li % p;
        }
    }
    x
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

/// `a^exp mod m`.
pub(crate) fn pow_poly_mod(a: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut base = rem(a, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        exp >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic `f` of degree `e >= 1` over `F_p`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let e = f.len() - 1;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    let x = vec![0, 1];
    // x^(p^i) mod f for i = 0..=e
    let mut powers = Vec::with_capacity(e + 1);
    let mut cur = rem(&x, f, p);
    powers.push(cur.clone());
    for _ in 0..e {
        cur = pow_poly_mod(&cur, p, f, p);
        powers.push(cur.clone());
    }
    if sub(&powers[e], &rem(&x, f, p), p) != Vec::<u64>::new() {
        return false;
    }
    for r in prime_factors(e as u64) {
        let i = e / r as usize;
        let h = sub(&powers[i], &x, p);
        if gcd(&h, f, p).len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rabin_agrees_with_known_small_cases() {
        // t^2 + t + 1 irreducible over F_2, t^2 + 1 = (t+1)^2 is not
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        // t^4 + t + 1 irreducible, t^4 + t^2 + 1 = (t^2+t+1)^2
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        // t^2 + 1 over F_3 is irreducible (-1 is not a square mod 3)
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
    }

    #[test]
    fn gcd_is_monic() {
        // (t+1)(t+2) and (t+1)(t+3) over F_5
        let a = mul(&[1, 1], &[2, 1], 5);
        let b = mul(&[1, 1], &[3, 1], 5);
        assert_eq!(gcd(&a, &b, 5), vec![1, 1]);
    }
}
