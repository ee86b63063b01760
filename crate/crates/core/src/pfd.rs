//! Partial fraction decomposition: classical over K(T), and coordinatewise
//! for pointed maps into commutative p-polynomial-presented groups. The base
//! point is ∞ throughout (properness = vanishing at ∞); a finite base point
//! is handled by a Möbius pre-substitution at the CLI layer.

use crate::error::{Error, Result};
use crate::groups::{membership, GroupPresentation};
use crate::ratfun::{RatFun, UPoly};

/// Distinct declared pole polynomials; pairwise coprime, monic, positive
/// degree.
#[derive(Debug, Clone)]
pub struct PoleSupport {
    pub polys: Vec<UPoly>,
}

impl PoleSupport {
    pub fn new(polys: Vec<UPoly>) -> Result<PoleSupport> {
        let mut monic = Vec::with_capacity(polys.len());
        for q in polys {
            if q.degree().unwrap_or(0) == 0 {
                return Err(Error::BadParams("pole polynomial must be nonconstant".into()));
            }
            monic.push(q.monic()?);
        }
        for i in 0..monic.len() {
            for j in i + 1..monic.len() {
                let g = monic[i].gcd(&monic[j])?;
                if g.degree() != Some(0) {
                    return Err(Error::SupportNotCoprime);
                }
            }
        }
        Ok(PoleSupport { polys: monic })
    }
}

/// Multiplicity of q in den, with the remaining cofactor.
fn multiplicity(den: &UPoly, q: &UPoly) -> Result<(u32, UPoly)> {
    let mut k = 0;
    let mut rest = den.clone();
    loop {
        let (quo, rem) = rest.divrem(q)?;
        if rem.is_zero() {
            k += 1;
            rest = quo;
        } else {
            return Ok((k, rest));
        }
    }
}

/// Decompose a proper G with denominator supported on the declared poles into
/// proper components g_i with den(g_i) | q_i^{k_i} and Σ g_i = G, the unique
/// such decomposition, by extended-gcd splitting.
pub fn classical_pfd(g: &RatFun, support: &PoleSupport) -> Result<Vec<RatFun>> {
    let ctx = g.ctx().clone();
    let m = support.polys.len();
    if g.is_zero() {
        return Ok(vec![RatFun::zero(&ctx); m]);
    }
    if !g.is_proper() {
        return Err(Error::NotProper);
    }
    let mut rest = g.den.clone();
    let mut powers = Vec::with_capacity(m);
    for q in &support.polys {
        let (k, r) = multiplicity(&rest, q)?;
        powers.push(if k == 0 { UPoly::one(&ctx) } else { q.pow(k) });
        rest = r;
    }
    if rest.degree() != Some(0) {
        return Err(Error::UnsupportedDenominator);
    }
    // split num / ∏ A_i one factor at a time
    let mut components = vec![RatFun::zero(&ctx); m];
    let mut num = g.num.clone();
    let mut active: Vec<usize> = (0..m).filter(|&i| powers[i].degree() != Some(0)).collect();
    while let Some(&i) = active.first() {
        let a = &powers[i];
        if active.len() == 1 {
            components[i] = RatFun::new(num.clone(), a.clone())?;
            break;
        }
        let mut b = UPoly::one(&ctx);
        for &j in &active[1..] {
            b = b.mul(&powers[j]);
        }
        let (gcd, u, v) = a.ext_gcd(&b)?;
        debug_assert_eq!(gcd.degree(), Some(0));
        // num/(AB) = (num·v mod A)/A + (num·u + s·B)/B where num·v = s·A + r
        let (s, r) = num.mul(&v).divrem(a)?;
        components[i] = RatFun::new(r, a.clone())?;
        num = num.mul(&u).add(&s.mul(&b));
        active.remove(0);
    }
    // exactness: Σ components = G
    let mut sum = RatFun::zero(&ctx);
    for c in &components {
        sum = sum.add(c)?;
    }
    assert_eq!(&sum, g, "partial fractions must re-sum exactly");
    for c in &components {
        assert!(c.is_proper(), "components must vanish at infinity");
    }
    Ok(components)
}

/// A pointed map from an open curve into a group presentation: coordinates in
/// K(T), all proper (the base point ∞ maps to the identity).
#[derive(Debug, Clone)]
pub struct PointedCurveMap {
    pub group: GroupPresentation,
    pub coords: Vec<RatFun>,
}

impl PointedCurveMap {
    pub fn new(group: GroupPresentation, coords: Vec<RatFun>) -> Result<PointedCurveMap> {
        if coords.len() != group.coords.len() {
            return Err(Error::ArityMismatch {
                expected: group.coords.len(),
                got: coords.len(),
            });
        }
        for c in &coords {
            if !c.is_proper() {
                return Err(Error::NotProper);
            }
        }
        if !membership(&group, &coords)? {
            return Err(Error::NotAMember);
        }
        Ok(PointedCurveMap { group, coords })
    }
}

/// Coordinatewise partial fractions of a pointed map; every component is
/// verified to land on the target group (for commutative p-polynomial
/// targets this is automatic, but the verification is asserted, not assumed).
pub fn group_pfd(f: &PointedCurveMap, support: &PoleSupport) -> Result<Vec<PointedCurveMap>> {
    let m = support.polys.len();
    let mut per_coord = Vec::with_capacity(f.coords.len());
    for c in &f.coords {
        per_coord.push(classical_pfd(c, support)?);
    }
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let coords: Vec<RatFun> = per_coord.iter().map(|d| d[i].clone()).collect();
        if !membership(&f.group, &coords)? {
            return Err(Error::ComponentNotOnGroup);
        }
        // pole locality: each denominator divides a power of q_i
        for c in &coords {
            let (_, rest) = multiplicity(&c.den, &support.polys[i])?;
            if rest.degree() != Some(0) {
                return Err(Error::ComponentNotOnGroup);
            }
        }
        out.push(PointedCurveMap { group: f.group.clone(), coords });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfield::{FieldContext, KElement};

    #[test]
    fn classical_char2_split() {
        // 1/(T(T+1)) = 1/T + 1/(T+1) in char 2
        let ctx = FieldContext::new(2, 1, 1);
        let t = UPoly::t(&ctx);
        let tp1 = t.add(&UPoly::one(&ctx));
        let g = RatFun::new(UPoly::one(&ctx), t.mul(&tp1)).unwrap();
        let support = PoleSupport::new(vec![t.clone(), tp1.clone()]).unwrap();
        let parts = classical_pfd(&g, &support).unwrap();
        assert_eq!(parts[0], RatFun::new(UPoly::one(&ctx), t.clone()).unwrap());
        assert_eq!(parts[1], RatFun::new(UPoly::one(&ctx), tp1.clone()).unwrap());
        // 1/T against {T, T+1} → [1/T, 0]
        let g = RatFun::new(UPoly::one(&ctx), t.clone()).unwrap();
        let parts = classical_pfd(&g, &support).unwrap();
        assert_eq!(parts[0], g);
        assert!(parts[1].is_zero());
        // zero input
        let parts = classical_pfd(&RatFun::zero(&ctx), &support).unwrap();
        assert!(parts.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn classical_rejects_bad_inputs() {
        let ctx = FieldContext::new(2, 1, 1);
        let t = UPoly::t(&ctx);
        let tp1 = t.add(&UPoly::one(&ctx));
        let support = PoleSupport::new(vec![t.clone()]).unwrap();
        // denominator not supported
        let g = RatFun::new(UPoly::one(&ctx), tp1.clone()).unwrap();
        assert!(matches!(
            classical_pfd(&g, &support),
            Err(Error::UnsupportedDenominator)
        ));
        // improper input
        let g = RatFun::from_poly(t.clone());
        assert!(matches!(classical_pfd(&g, &support), Err(Error::NotProper)));
        // non-coprime support
        assert!(matches!(
            PoleSupport::new(vec![t.clone(), t.mul(&tp1)]),
            Err(Error::SupportNotCoprime)
        ));
    }

    #[test]
    fn multiplicity_splitting_and_idempotence() {
        let ctx = FieldContext::new(3, 1, 1);
        let t = UPoly::t(&ctx);
        let q = t.mul(&t).add(&UPoly::constant(KElement::lambda(&ctx, 0)));
        let den = t.pow(2).mul(&q);
        let g = RatFun::new(UPoly::one(&ctx), den).unwrap();
        let support = PoleSupport::new(vec![t.clone(), q.clone()]).unwrap();
        let parts = classical_pfd(&g, &support).unwrap();
        let mut sum = RatFun::zero(&ctx);
        for p in &parts {
            sum = sum.add(p).unwrap();
        }
        assert_eq!(sum, g);
        // idempotence: decomposing a component returns itself plus zeros
        let again = classical_pfd(&parts[0], &support).unwrap();
        assert_eq!(again[0], parts[0]);
        assert!(again[1].is_zero());
    }
}
