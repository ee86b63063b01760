//! The finite field F_q, q = p^e, with elements packed into a `u64`.
//!
//! Elements are encoded as integers in `[0, q)` whose base-p digits are the
//! coefficients of the representative polynomial over F_p. Encoding 0 is the
//! zero element and encoding 1 is the unit, so the natural integer order gives
//! a canonical enumeration used for deterministic tie-breaking.

/// Field descriptor for F_{p^e}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fq {
    pub p: u64,
    pub e: u32,
    /// Monic irreducible modulus over F_p, degree e, coefficients ascending.
    modulus: Vec<u64>,
}

pub type FqElem = u64;

impl Fq {
    pub fn new(p: u64, e: u32) -> Self {
        assert!(is_prime(p), "p must be prime");
        assert!(e >= 1 && e <= 12, "extension degree out of range");
        let modulus = find_irreducible(p, e);
        Fq { p, e, modulus }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    fn to_digits(&self, x: FqElem) -> Vec<u64> {
        let mut v = vec![0; self.e as usize];
        let mut x = x;
        for d in v.iter_mut() {
            *d = x % self.p;
            x /= self.p;
        }
        v
    }

    fn from_digits(&self, d: &[u64]) -> FqElem {
        let mut x = 0u64;
        for &c in d.iter().rev() {
            x = x * self.p + c % self.p;
        }
        x
    }

    pub fn from_int(&self, n: i64) -> FqElem {
        let r = n.rem_euclid(self.p as i64) as u64;
        r
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let (da, db) = (self.to_digits(a), self.to_digits(b));
        let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&s)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        let da = self.to_digits(a);
        let s: Vec<u64> = da.iter().map(|x| (self.p - x) % self.p).collect();
        self.from_digits(&s)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a == 0 || b == 0 {
            return 0;
        }
        let (da, db) = (self.to_digits(a), self.to_digits(b));
        let mut prod = vec![0u64; 2 * self.e as usize];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce by the monic modulus
        for i in (self.e as usize..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            let shift = i - self.e as usize;
            for (j, &m) in self.modulus.iter().enumerate().take(self.e as usize) {
                let idx = shift + j;
                prod[idx] = (prod[idx] + c * (self.p - m) % self.p) % self.p;
            }
        }
        self.from_digits(&prod[..self.e as usize])
    }

    pub fn pow(&self, a: FqElem, mut n: u64) -> FqElem {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FqElem) -> FqElem {
        assert!(a != 0, "inversion of zero in F_q");
        self.pow(a, self.q() - 2)
    }

    /// The unique p-th root (Frobenius is bijective on a finite field).
    pub fn pth_root(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p.pow(self.e - 1))
    }

    /// x ↦ x^{p^d}.
    pub fn frob(&self, a: FqElem, d: u32) -> FqElem {
        let mut x = a;
        for _ in 0..(d % self.e.max(1)) {
            x = self.pow(x, self.p);
        }
        x
    }

    /// n-th root when one exists, scanning in canonical ascending order.
    pub fn nth_root(&self, a: FqElem, n: u64) -> Option<FqElem> {
        (0..self.q()).find(|&x| self.pow(x, n) == a)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        0..self.q()
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest monic irreducible polynomial of degree e over F_p
/// (coefficients ascending, leading 1), found by trial division.
fn find_irreducible(p: u64, e: u32) -> Vec<u64> {
    if e == 1 {
        return vec![0, 1];
    }
    let e = e as usize;
    let count = p.pow(e as u32);
    'cand: for code in 0..count {
        let mut poly = vec![0u64; e + 1];
        let mut c = code;
        for coeff in poly.iter_mut().take(e) {
            *coeff = c % p;
            c /= p;
        }
        poly[e] = 1;
        // trial division by every monic polynomial of degree 1..=e/2
        for d in 1..=e / 2 {
            let dcount = p.pow(d as u32);
            for fcode in 0..dcount {
                let mut f = vec![0u64; d + 1];
                let mut c = fcode;
                for coeff in f.iter_mut().take(d) {
                    *coeff = c % p;
                    c /= p;
                }
                f[d] = 1;
                if poly_divisible(&poly, &f, p) {
                    continue 'cand;
                }
            }
        }
        return poly;
    }
    unreachable!("irreducible polynomial exists for every degree");
}

fn poly_divisible(a: &[u64], b: &[u64], p: u64) -> bool {
    let mut r: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && r.len() >= b.len() {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let shift = r.len() - b.len();
            for (j, &m) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + lead * (p - m) % p) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_arithmetic() {
        let f = Fq::new(2, 2);
        // the generator g satisfies g^2 = g + 1 (the only irreducible quadratic over F_2)
        let g = 2; // digits (0,1)
        assert_eq!(f.mul(g, g), f.add(g, 1));
        assert_eq!(f.mul(g, f.inv(g)), 1);
        assert_eq!(f.pth_root(f.mul(g, g)), g);
    }

    #[test]
    fn f9_inverse_roundtrip() {
        let f = Fq::new(3, 2);
        for x in 1..f.q() {
            assert_eq!(f.mul(x, f.inv(x)), 1);
            assert_eq!(f.pow(f.pth_root(x), 3), x);
        }
    }

    #[test]
    fn nth_root_prefers_canonical_least() {
        let f = Fq::new(3, 1);
        // both 1 and 2 square to 1; ascending scan returns 1
        assert_eq!(f.nth_root(1, 2), Some(1));
    }
}
