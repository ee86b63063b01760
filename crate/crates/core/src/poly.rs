//! Sparse multivariate polynomials over F_q.
//!
//! Variables are positional: indices `0..r` are the p-basis generators
//! λ_1..λ_r, indices `r..` are tower generators. Terms are kept sorted in
//! descending lexicographic order with no zero coefficients, so structural
//! equality is semantic equality.

use crate::fq::{Fq, FqElem};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        Mono(v)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn pow_scale(&self, k: u32) -> Mono {
        Mono(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MPoly {
    pub nvars: usize,
    /// (monomial, coefficient), sorted descending by monomial, coefficients nonzero.
    pub terms: Vec<(Mono, FqElem)>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: vec![] }
    }

    pub fn constant(c: FqElem, nvars: usize) -> Self {
        if c == 0 {
            Self::zero(nvars)
        } else {
            MPoly { nvars, terms: vec![(Mono::one(nvars), c)] }
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(1, nvars)
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        MPoly { nvars, terms: vec![(Mono::var(i, nvars), 1)] }
    }

    pub fn monomial(m: Mono, c: FqElem) -> Self {
        let nvars = m.0.len();
        if c == 0 {
            Self::zero(nvars)
        } else {
            MPoly { nvars, terms: vec![(m, c)] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<FqElem> {
        if self.is_zero() {
            Some(0)
        } else if self.is_constant() {
            Some(self.terms[0].1)
        } else {
            None
        }
    }

    /// Rebuild from an unsorted term list, combining duplicates.
    pub fn from_terms(nvars: usize, fq: &Fq, mut terms: Vec<(Mono, FqElem)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, FqElem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = fq.add(last.1, c);
                    if last.1 == 0 {
                        out.pop();
                    }
                    continue;
                }
            }
            if c != 0 {
                out.push((m, c));
            }
        }
        MPoly { nvars, terms: out }
    }

    pub fn add(&self, other: &MPoly, fq: &Fq) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(self.nvars, fq, terms)
    }

    pub fn neg(&self, fq: &Fq) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), fq.neg(*c))).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly, fq: &Fq) -> MPoly {
        self.add(&other.neg(fq), fq)
    }

    pub fn mul(&self, other: &MPoly, fq: &Fq) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                terms.push((m1.mul(m2), fq.mul(*c1, *c2)));
            }
        }
        Self::from_terms(self.nvars, fq, terms)
    }

    pub fn mul_scalar(&self, c: FqElem, fq: &Fq) -> MPoly {
        if c == 0 {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), fq.mul(*k, c))).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(mm, c)| (mm.mul(m), *c)).collect(),
        }
    }

    pub fn pow(&self, mut n: u32, fq: &Fq) -> MPoly {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, fq);
            }
            base = base.mul(&base, fq);
            n >>= 1;
        }
        acc
    }

    /// Frobenius power without rule reduction: exponents scale by p^d and
    /// coefficients go through the field Frobenius.
    pub fn raw_pow_p(&self, d: u32, fq: &Fq) -> MPoly {
        let scale = (fq.p as u64).pow(d) as u32;
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.pow_scale(scale), fq.frob(*c, d)))
                .collect(),
        }
    }

    pub fn extend_vars(&self, nvars: usize) -> MPoly {
        debug_assert!(nvars >= self.nvars);
        MPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut v = m.0.clone();
                    v.resize(nvars, 0);
                    (Mono(v), *c)
                })
                .collect(),
        }
    }

    pub fn deg_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[v]).max().unwrap_or(0)
    }

    pub fn max_var_used(&self) -> Option<usize> {
        let mut best = None;
        for (m, _) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    best = Some(best.map_or(i, |b: usize| b.max(i)));
                }
            }
        }
        best
    }

    /// Coefficient of v^k, as a polynomial with v-exponent zeroed.
    pub fn coeff_of(&self, v: usize, k: u32) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[v] == k)
            .map(|(m, c)| {
                let mut mm = m.clone();
                mm.0[v] = 0;
                (mm, *c)
            })
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    pub fn uses_var_at_or_above(&self, v: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.0[v..].iter().any(|&e| e > 0))
    }

    /// Exact division; `None` if not divisible.
    pub fn divexact(&self, b: &MPoly, fq: &Fq) -> Option<MPoly> {
        assert!(!b.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, FqElem)> = vec![];
        let (bm, bc) = (&b.terms[0].0, b.terms[0].1);
        let bcinv = fq.inv(bc);
        while !rem.is_zero() {
            let (rm, rc) = (&rem.terms[0].0, rem.terms[0].1);
            if !bm.divides(rm) {
                return None;
            }
            let qm = rm.div(bm);
            let qc = fq.mul(rc, bcinv);
            let t = MPoly::monomial(qm.clone(), qc);
            rem = rem.sub(&t.mul(b, fq), fq);
            quot.push((qm, qc));
        }
        Some(MPoly::from_terms(self.nvars, fq, quot))
    }

    pub fn lead_coeff(&self) -> FqElem {
        self.terms.first().map(|(_, c)| *c).unwrap_or(0)
    }

    /// Scale so the lex-leading coefficient is 1.
    pub fn monic(&self, fq: &Fq) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.mul_scalar(fq.inv(self.lead_coeff()), fq)
    }

    /// Componentwise minimum of all exponent vectors (the monomial content).
    pub fn mono_content(&self) -> Mono {
        let mut min = match self.terms.first() {
            None => return Mono::one(self.nvars),
            Some((m, _)) => m.0.clone(),
        };
        for (m, _) in &self.terms[1..] {
            for (a, b) in min.iter_mut().zip(&m.0) {
                *a = (*a).min(*b);
            }
        }
        Mono(min)
    }

    pub fn div_mono(&self, m: &Mono) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(mm, c)| (mm.div(m), *c)).collect(),
        }
    }
}

/// Multivariate gcd by primitive pseudo-remainder sequences, recursing on the
/// highest variable that actually occurs. Adequate for the small-degree
/// denominators this crate produces. Result is lex-monic.
pub fn gcd(a: &MPoly, b: &MPoly, fq: &Fq) -> MPoly {
    if a.is_zero() {
        return b.monic(fq);
    }
    if b.is_zero() {
        return a.monic(fq);
    }
    let v = match a.max_var_used().into_iter().chain(b.max_var_used()).max() {
        None => return MPoly::one(a.nvars),
        Some(v) => v,
    };
    if a.deg_in(v) == 0 || b.deg_in(v) == 0 {
        // one side is free of the main variable: gcd divides its content
        let (flat, tall) = if a.deg_in(v) == 0 { (a, b) } else { (b, a) };
        let cont = content_wrt(tall, v, fq);
        return gcd(flat, &cont, fq);
    }
    let ca = content_wrt(a, v, fq);
    let cb = content_wrt(b, v, fq);
    let g0 = gcd(&ca, &cb, fq);
    let mut f = a.divexact(&ca, fq).expect("content divides");
    let mut g = b.divexact(&cb, fq).expect("content divides");
    if f.deg_in(v) < g.deg_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        if g.is_zero() {
            let cf = content_wrt(&f, v, fq);
            let prim = f.divexact(&cf, fq).expect("content divides");
            return g0.mul(&prim, fq).monic(fq);
        }
        let r = pseudo_rem(&f, &g, v, fq);
        f = g;
        g = if r.is_zero() {
            r
        } else {
            let cr = content_wrt(&r, v, fq);
            r.divexact(&cr, fq).expect("content divides")
        };
    }
}

/// Content of `a` with respect to variable `v`: gcd of its v-coefficients.
fn content_wrt(a: &MPoly, v: usize, fq: &Fq) -> MPoly {
    let mut acc = MPoly::zero(a.nvars);
    for k in 0..=a.deg_in(v) {
        let c = a.coeff_of(v, k);
        if !c.is_zero() {
            acc = gcd(&acc, &c, fq);
            if acc.is_constant() && !acc.is_zero() {
                return MPoly::one(a.nvars);
            }
        }
    }
    acc
}

/// Pseudo-remainder of f by g in the variable v.
fn pseudo_rem(f: &MPoly, g: &MPoly, v: usize, fq: &Fq) -> MPoly {
    let dg = g.deg_in(v);
    let lg = g.coeff_of(v, dg);
    let mut r = f.clone();
    while !r.is_zero() && r.deg_in(v) >= dg {
        let dr = r.deg_in(v);
        let lr = r.coeff_of(v, dr);
        let mut shift = Mono::one(f.nvars);
        shift.0[v] = dr - dg;
        // lg * r - lr * x^(dr-dg) * g
        r = r.mul(&lg, fq).sub(&lr.mul_mono(&shift).mul(g, fq), fq);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fq {
        Fq::new(2, 1)
    }

    #[test]
    fn mul_and_sort() {
        let fq = f2();
        let x = MPoly::var(0, 2);
        let y = MPoly::var(1, 2);
        let s = x.add(&y, &fq);
        let sq = s.mul(&s, &fq);
        // freshman's dream in char 2
        let expect = x.mul(&x, &fq).add(&y.mul(&y, &fq), &fq);
        assert_eq!(sq, expect);
    }

    #[test]
    fn gcd_univariate() {
        let fq = f2();
        let x = MPoly::var(0, 1);
        let one = MPoly::one(1);
        let a = x.add(&one, &fq); // x+1
        let b = x.mul(&x, &fq).add(&one, &fq); // x^2+1 = (x+1)^2
        let g = gcd(&a, &b, &fq);
        assert_eq!(g, a);
    }

    #[test]
    fn gcd_bivariate() {
        let fq = Fq::new(3, 1);
        let x = MPoly::var(0, 2);
        let y = MPoly::var(1, 2);
        let f = x.add(&y, &fq);
        let a = f.mul(&f, &fq).mul(&x, &fq);
        let b = f.mul(&y, &fq);
        let g = gcd(&a, &b, &fq);
        assert_eq!(g, f.monic(&fq));
    }

    #[test]
    fn divexact_detects_failure() {
        let fq = f2();
        let x = MPoly::var(0, 1);
        let one = MPoly::one(1);
        assert!(x.add(&one, &fq).divexact(&x, &fq).is_none());
    }
}
