//! Degree of imprimitivity, p-independence, and generating-set algorithms
//! for purely inseparable extensions and finite reduced algebras over K.
//!
//! Elements of the perfect closure are pairs (val, m) standing for
//! val^{1/p^m}; at a common level m the coordinate map through the level-m
//! p-basis expansion is K-linear, so membership in the K-span of a monomial
//! basis reduces to echelon reduction over K.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::idx::MultiIdx;
use crate::kfield::{Ctx, KElement};

#[derive(Debug, Clone)]
pub struct PureInsepExtension {
    pub ctx: Ctx,
    /// (a, n) means adjoin a^{1/p^n}; a ≠ 0, n ≥ 1.
    pub gens: Vec<(KElement, u32)>,
}

impl PureInsepExtension {
    pub fn new(ctx: Ctx, gens: Vec<(KElement, u32)>) -> Self {
        for (a, n) in &gens {
            assert!(!a.is_zero(), "generator must be nonzero");
            assert!(*n >= 1, "generator height must be positive");
        }
        PureInsepExtension { ctx, gens }
    }
}

/// A finite reduced algebra presented as a product of purely inseparable
/// extension fields of the same K.
#[derive(Debug, Clone)]
pub struct AlgebraDescriptor {
    pub factors: Vec<PureInsepExtension>,
}

/// An element a^{1/p^level} of the perfect closure.
#[derive(Debug, Clone)]
struct PerfElt {
    val: KElement,
    level: u32,
}

impl PerfElt {
    fn at_level(&self, m: u32) -> KElement {
        assert!(m >= self.level);
        self.val.frobenius(m - self.level)
    }

    fn mul(&self, other: &PerfElt) -> PerfElt {
        let m = self.level.max(other.level);
        PerfElt {
            val: self.at_level(m).mul(&other.at_level(m)),
            level: m,
        }
    }

    fn pow(&self, k: u32) -> PerfElt {
        PerfElt {
            val: self.val.pow(k),
            level: self.level,
        }
    }
}

/// K-span of a multiplicatively closed monomial basis inside K^{1/p^M},
/// kept in echelon form over the level-M expansion coordinates.
struct Span {
    ctx: Ctx,
    m: u32,
    /// rows sorted by pivot index; each row normalized with pivot coeff 1
    rows: Vec<(MultiIdx, BTreeMap<MultiIdx, KElement>)>,
    /// the monomial basis itself, for extension steps
    basis: Vec<PerfElt>,
}

impl Span {
    fn new(ctx: &Ctx, m: u32) -> Result<Span> {
        let mut s = Span {
            ctx: ctx.clone(),
            m,
            rows: vec![],
            basis: vec![],
        };
        s.insert(PerfElt { val: KElement::one(ctx), level: 0 })?;
        Ok(s)
    }

    fn coords(&self, x: &PerfElt) -> Result<BTreeMap<MultiIdx, KElement>> {
        let lifted = x.at_level(self.m);
        if self.m == 0 {
            let mut map = BTreeMap::new();
            if !lifted.is_zero() {
                map.insert(vec![0; self.ctx.r], lifted);
            }
            return Ok(map);
        }
        let exp = lifted.pbasis_expand(self.m)?;
        Ok(exp.coeffs)
    }

    fn reduce(&self, mut v: BTreeMap<MultiIdx, KElement>) -> BTreeMap<MultiIdx, KElement> {
        for (piv, row) in &self.rows {
            if let Some(c) = v.get(piv).cloned() {
                if c.is_zero() {
                    v.remove(piv);
                    continue;
                }
                for (k, rv) in row {
                    let cur = v
                        .get(k)
                        .cloned()
                        .unwrap_or_else(|| KElement::zero(&self.ctx));
                    let nv = cur.sub(&c.mul(rv));
                    if nv.is_zero() {
                        v.remove(k);
                    } else {
                        v.insert(k.clone(), nv);
                    }
                }
            }
        }
        v.retain(|_, c| !c.is_zero());
        v
    }

    fn contains(&self, x: &PerfElt) -> Result<bool> {
        Ok(self.reduce(self.coords(x)?).is_empty())
    }

    /// Insert x into the span; true if it enlarged the span. Does not touch
    /// the monomial basis (callers extend that explicitly).
    fn insert(&mut self, x: PerfElt) -> Result<bool> {
        let red = self.reduce(self.coords(&x)?);
        let Some((piv, pc)) = red.iter().next().map(|(k, v)| (k.clone(), v.clone())) else {
            return Ok(false);
        };
        let pcinv = pc.inv()?;
        let row: BTreeMap<MultiIdx, KElement> =
            red.into_iter().map(|(k, v)| (k, v.mul(&pcinv))).collect();
        let pos = self
            .rows
            .binary_search_by(|(p, _)| p.cmp(&piv))
            .unwrap_err();
        self.rows.insert(pos, (piv, row));
        self.basis.push(x);
        Ok(true)
    }

    /// Adjoin a generator of height t over the current field: multiply the
    /// monomial basis by g^k for 0 < k < p^t.
    fn extend_by(&mut self, g: &PerfElt, t: u32) -> Result<()> {
        let p = self.ctx.p as u32;
        let old = self.basis.clone();
        for k in 1..p.pow(t) {
            let gk = g.pow(k);
            for b in &old {
                self.insert(b.mul(&gk))?;
            }
        }
        Ok(())
    }
}

/// [K(S^{1/p}) : K] = p^{|S|}? Each adjunction must contribute a full factor p.
pub fn is_p_independent(ctx: &Ctx, s: &[KElement]) -> Result<bool> {
    let mut span = Span::new(ctx, 1)?;
    for a in s {
        assert!(!a.is_zero(), "p-independence is about nonzero elements");
        let g = PerfElt { val: a.clone(), level: 1 };
        if span.contains(&g)? {
            return Ok(false);
        }
        span.extend_by(&g, 1)?;
    }
    Ok(true)
}

fn max_level(ext: &PureInsepExtension) -> u32 {
    ext.gens.iter().map(|(_, n)| *n).max().unwrap_or(0)
}

/// Span of K·L^p = K({a_j^{1/p^{n_j - 1}}}) at working level m.
fn klp_span(ext: &PureInsepExtension, m: u32) -> Result<Span> {
    let mut span = Span::new(&ext.ctx, m)?;
    for (a, n) in &ext.gens {
        if *n <= 1 {
            continue; // a^{1/p^0} already in K
        }
        let g = PerfElt { val: a.clone(), level: n - 1 };
        adjoin_minimal(&mut span, &g, n - 1)?;
    }
    Ok(span)
}

/// Adjoin g (with g^{p^{height}} ∈ K) at its minimal degree over the span.
/// Returns t with [F(g) : F] = p^t.
fn adjoin_minimal(span: &mut Span, g: &PerfElt, height: u32) -> Result<u32> {
    let mut t = 0;
    while t <= height {
        // g^{p^t} = val^{1/p^{level - t}}
        let gp = PerfElt {
            val: g.val.clone(),
            level: g.level - t,
        };
        if span.contains(&gp)? {
            break;
        }
        t += 1;
    }
    if t > 0 {
        span.extend_by(g, t)?;
    }
    Ok(t)
}

/// Degree of imprimitivity: the r with [L : KL^p] = p^r, accumulated one
/// generator at a time over the KL^p-span by pth-power membership tests.
pub fn imp(ext: &PureInsepExtension) -> Result<u32> {
    let m = max_level(ext);
    if m == 0 {
        return Ok(0);
    }
    let mut span = klp_span(ext, m)?;
    let mut count = 0;
    for (a, n) in &ext.gens {
        let g = PerfElt { val: a.clone(), level: *n };
        if !span.contains(&g)? {
            count += 1;
            span.extend_by(&g, 1)?; // g^p ∈ KL^p, so height one here
        }
    }
    Ok(count)
}

/// imp of the compositum of all factors: concatenate generator lists.
pub fn imp_algebra(alg: &AlgebraDescriptor) -> Result<u32> {
    assert!(!alg.factors.is_empty(), "algebra must have at least one factor");
    let ctx = alg.factors[0].ctx.clone();
    let mut gens = vec![];
    for f in &alg.factors {
        assert_eq!(f.ctx.id, ctx.id, "all factors must share one context");
        gens.extend(f.gens.iter().cloned());
    }
    imp(&PureInsepExtension { ctx, gens })
}

/// Total degree [L : K] of the extension.
pub fn degree(ext: &PureInsepExtension) -> Result<u64> {
    let m = max_level(ext);
    let mut span = Span::new(&ext.ctx, m)?;
    let mut deg = 1u64;
    for (a, n) in &ext.gens {
        let g = PerfElt { val: a.clone(), level: *n };
        let t = adjoin_minimal(&mut span, &g, *n)?;
        deg *= (ext.ctx.p).pow(t);
    }
    Ok(deg)
}

/// Indices of imp(ext) generators that generate L over K, chosen greedily
/// over the height-one reduction L / L^p·K and validated by a degree check.
pub fn min_generating_subset(ext: &PureInsepExtension) -> Result<Vec<usize>> {
    let m = max_level(ext);
    if m == 0 {
        return Ok(vec![]);
    }
    let want = imp(ext)?;
    let mut span = klp_span(ext, m)?;
    let mut selected = vec![];
    for (j, (a, n)) in ext.gens.iter().enumerate() {
        let g = PerfElt { val: a.clone(), level: *n };
        if !span.contains(&g)? {
            selected.push(j);
            span.extend_by(&g, 1)?;
        }
    }
    assert_eq!(selected.len() as u32, want, "greedy selection must match imp");
    // validation: the selected generators alone span the full extension
    let sub = PureInsepExtension {
        ctx: ext.ctx.clone(),
        gens: selected.iter().map(|&j| ext.gens[j].clone()).collect(),
    };
    let mut full = Span::new(&ext.ctx, m)?;
    for (a, n) in &sub.gens {
        let g = PerfElt { val: a.clone(), level: *n };
        adjoin_minimal(&mut full, &g, *n)?;
    }
    for (a, n) in &ext.gens {
        let g = PerfElt { val: a.clone(), level: *n };
        assert!(
            full.contains(&g)?,
            "selected subset fails to generate the extension"
        );
    }
    debug_assert_eq!(degree(&sub)?, degree(ext)?);
    Ok(selected)
}
