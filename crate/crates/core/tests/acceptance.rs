//! Acceptance suite: each test is one acceptance criterion, run at its
//! stated tolerance, printing one pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use permawound::cohokill::{self, lucas_binom, TargetForm, Witness};
use permawound::groups::{self, Preset};
use permawound::identities::{self, PairingMode, Verdict};
use permawound::imprim::{self, PureInsepExtension};
use permawound::kfield::{random_element, Ctx, FieldContext, KElement};
use permawound::pfd::{self, PointedCurveMap, PoleSupport};
use permawound::ppoly::{self, Certificate};
use permawound::ratfun::{substitute, RatFun, UPoly};

fn finish(criterion: u32, what: &str, t0: Instant, budget: Duration) {
    let elapsed = t0.elapsed();
    println!(
        "ACCEPTANCE {criterion}: PASS — {what} ({:.2}s, budget {:.0}s)",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its runtime budget: {elapsed:?} > {budget:?}"
    );
}

#[test]
fn criterion_1_degree_of_imprimitivity() {
    let t0 = Instant::now();
    for p in [2u64, 3] {
        for r in [1usize, 2] {
            let ctx = FieldContext::new(p, 1, r);
            for n in 1..=2u32 {
                // K(λ₁^{1/p^n}, …, λ_r^{1/p^n}) — in particular n = 1 is the
                // p-basis-root case and general n is K^{1/p^n}
                let gens: Vec<(KElement, u32)> =
                    (0..r).map(|i| (KElement::lambda(&ctx, i), n)).collect();
                let ext = PureInsepExtension::new(ctx.clone(), gens);
                assert_eq!(imprim::imp(&ext).unwrap(), r as u32, "p={p} r={r} n={n}");
            }
        }
    }
    // monotonicity and the ≤ r bound on 100 random generator lists
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut done = 0;
    while done < 100 {
        let p = [2u64, 3][rng.gen_range(0..2)];
        let r = 1 + rng.gen_range(0..2usize);
        let ctx = FieldContext::new(p, 1, r);
        let count = 1 + rng.gen_range(0..4usize);
        let mut gens = vec![];
        for _ in 0..count {
            let mut a = random_element(&ctx, &mut rng, 2, 2);
            while a.is_zero() {
                a = random_element(&ctx, &mut rng, 2, 2);
            }
            gens.push((a, 1 + rng.gen_range(0..2u32)));
        }
        let full = PureInsepExtension::new(ctx.clone(), gens.clone());
        let full_imp = imprim::imp(&full).unwrap();
        assert!(full_imp <= r as u32, "imp exceeds the degree of imperfection");
        let prefix = PureInsepExtension::new(ctx.clone(), gens[..count - 1].to_vec());
        assert!(
            imprim::imp(&prefix).unwrap() <= full_imp,
            "imp must be monotone under adding generators"
        );
        let sel = imprim::min_generating_subset(&full).unwrap();
        assert_eq!(sel.len() as u32, full_imp);
        done += 1;
    }
    finish(
        1,
        "imp(K(λ^{1/p^n})/K) = r for p ∈ {2,3}, r ≤ 2, n ≤ 2; monotone and ≤ r on 100 random lists",
        t0,
        Duration::from_secs(10),
    );
}

fn simple_pole_target(ctx: &Ctx, beta: &KElement, n: u32) -> RatFun {
    let q = UPoly::from_terms(
        ctx,
        vec![(ctx.p.pow(n), KElement::one(ctx)), (0, KElement::lambda(ctx, 0))],
    );
    RatFun::new(UPoly::constant(beta.clone()), q).unwrap()
}

#[test]
fn criterion_2_simple_pole_closed_form() {
    let t0 = Instant::now();
    let mut runs = 0;
    for p in [2u64, 3] {
        for r in [1usize, 2] {
            for n in 1..=2u32 {
                let ctx = FieldContext::new(p, 1, r);
                let basis: Vec<KElement> =
                    (0..r).map(|i| KElement::lambda(&ctx, i)).collect();
                let mut rng = ChaCha8Rng::seed_from_u64(2000 + p * 10 + r as u64 + n as u64);
                for _ in 0..25 {
                    let beta = random_element(&ctx, &mut rng, 2, 3);
                    let (cx, w) =
                        cohokill::witness_simple_pole_in_basis(&ctx, &basis, &beta, n).unwrap();
                    let g = simple_pole_target(&ctx, &beta, n).lift_to(&cx).unwrap();
                    assert!(w.alpha.is_one() && w.d == 0);
                    assert!(
                        cohokill::verify_witness(&g, &w),
                        "simple-pole witness failed at p={p} r={r} n={n}"
                    );
                    runs += 1;
                }
            }
        }
    }
    assert_eq!(runs, 200);
    finish(
        2,
        "closed-form witness F(H) = β/(T^{p^n}+λ₁) exact on 25 random β × 8 configs",
        t0,
        Duration::from_secs(30),
    );
}

struct KillCase {
    g: RatFun,
    factors: Vec<(u32, KElement)>,
    sterm_bound: u64,
    n_max: u32,
}

fn random_kill_case(ctx: &Ctx, rng: &mut ChaCha8Rng) -> KillCase {
    let p = ctx.p;
    let npoles = 1 + rng.gen_range(0..2usize);
    let mut factors: Vec<(u32, KElement)> = vec![];
    let mut qs: Vec<UPoly> = vec![];
    let mut es = vec![];
    let mut guard = 0;
    while factors.len() < npoles {
        guard += 1;
        assert!(guard < 100, "could not build a coprime pole set");
        let n = 1 + rng.gen_range(0..2u32);
        // plant a p-th-power modulus occasionally (level capped for p = 3)
        let planted = rng.gen_bool(0.25) && (p == 2 || n == 1);
        let mut mu = random_element(ctx, rng, 1, 2);
        while mu.is_zero() {
            mu = random_element(ctx, rng, 1, 2);
        }
        if planted {
            mu = mu.frobenius(1);
        }
        let q = UPoly::from_terms(ctx, vec![(p.pow(n), KElement::one(ctx)), (0, mu.clone())]);
        let mut cand = qs.clone();
        cand.push(q.clone());
        if PoleSupport::new(cand).is_err() {
            continue;
        }
        let e = if p == 2 && n == 1 && rng.gen_bool(0.2) { 2u32 } else { 1 };
        factors.push((n, mu));
        qs.push(q);
        es.push(e);
    }
    let mut den = UPoly::one(ctx);
    for (q, &e) in qs.iter().zip(&es) {
        den = den.mul(&q.pow(e));
    }
    let deg_num = rng.gen_range(0..=(p * p)) as usize;
    let mut num = UPoly::zero(ctx);
    for k in 0..=deg_num {
        if rng.gen_bool(0.7) {
            num = num.add(&UPoly::monomial(random_element(ctx, rng, 1, 2), k as u64));
        }
    }
    let g = RatFun::new(num, den.clone()).unwrap();
    // regression bound data: conservative S-term count
    let mut sterms = (deg_num as u64).saturating_sub(den.degree().unwrap_or(0)) + 1;
    let mut n_max = 0;
    for ((n, _), &e) in factors.iter().zip(&es) {
        let mut k = 0u32;
        while p.pow(k) < e as u64 {
            k += 1;
        }
        sterms += p.pow(n + k);
        n_max = n_max.max(n + k);
    }
    KillCase { g, factors, sterm_bound: sterms, n_max }
}

#[test]
fn criterion_3_kill_class_soundness() {
    let t0 = Instant::now();
    for (p, r) in [(2u64, 1usize), (2, 2), (3, 1), (3, 2)] {
        let ctx = FieldContext::new(p, 1, r);
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + p * 10 + r as u64);
        for i in 0..200 {
            let case = random_kill_case(&ctx, &mut rng);
            let (_, w) =
                cohokill::kill_class(&ctx, &case.g, &case.factors, TargetForm::V)
                    .unwrap_or_else(|e| panic!("kill failed at p={p} r={r} i={i}: {e}"));
            assert!(
                cohokill::verify_witness(&case.g, &w),
                "certificate failed verification at p={p} r={r} i={i}"
            );
            // degree accounting (a regression bound on the corpus)
            assert!(
                (w.d as u64) <= case.sterm_bound * (case.n_max as u64 + 1),
                "substitution depth {} exceeds the regression bound at p={p} r={r} i={i}",
                w.d
            );
            // the α_p-target variant on the same input
            let (_, wa) =
                cohokill::kill_class(&ctx, &case.g, &case.factors, TargetForm::AlphaP).unwrap();
            assert!(cohokill::verify_witness(&case.g, &wa));
        }
    }
    finish(
        3,
        "kill_class emits verifying certificates on 200 random G × 4 configs (+ α_p variant)",
        t0,
        Duration::from_secs(300),
    );
}

/// A nonzero point of the universal hypersurface group over K(T): the
/// closed-form coordinates with a prime-field Artin–Schreier root k (so the
/// target is ℘(k)/q = 0), composed with T ↦ αT^{p^d}.
fn v_point(ctx: &Ctx, k: i64, alpha: &KElement, d: u32) -> (Vec<RatFun>, UPoly) {
    let p = ctx.p;
    let lam = KElement::lambda(ctx, 0);
    let q = UPoly::from_terms(ctx, vec![(p, KElement::one(ctx)), (0, lam.clone())]);
    let gamma = KElement::from_int(ctx, k);
    let idxs = permawound::idx::enumerate(ctx.r, p as u32);
    let mut coords = Vec::with_capacity(idxs.len());
    for f in &idxs {
        if f[1..].iter().any(|&x| x != 0) {
            coords.push(RatFun::zero(ctx));
            continue;
        }
        let j = f[0] as u64;
        let h = if j == 0 {
            RatFun::new(UPoly::constant(lam.mul(&gamma)), q.clone()).unwrap()
        } else {
            let cb = lucas_binom(p - 1, j - 1, p);
            RatFun::new(UPoly::monomial(gamma.mul_int(cb as i64), p - j), q.clone()).unwrap()
        };
        coords.push(substitute(&h, alpha, d).unwrap());
    }
    // the substituted pole polynomial, monic: T^{p^{1+d}} + λ·α^{-p}
    let mu = lam.mul(&alpha.frobenius(1).inv().unwrap());
    let pole = UPoly::from_terms(ctx, vec![(p.pow(1 + d), KElement::one(ctx)), (0, mu)]);
    (coords, pole)
}

#[test]
fn criterion_4_group_pfd_invariants() {
    let t0 = Instant::now();
    let ctx = FieldContext::new(2, 1, 1);
    let group = groups::make_group(Preset::V, &ctx, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    let mut built = 0;
    while built < 100 {
        let nparts = 1 + rng.gen_range(0..2usize);
        let mut points = vec![];
        let mut poles = vec![];
        for _ in 0..nparts {
            let mut alpha = random_element(&ctx, &mut rng, 1, 2);
            while alpha.is_zero() {
                alpha = random_element(&ctx, &mut rng, 1, 2);
            }
            let d = rng.gen_range(0..2u32);
            let (coords, pole) = v_point(&ctx, 1, &alpha, d);
            points.push(coords);
            poles.push(pole);
        }
        let support = match PoleSupport::new(poles.clone()) {
            Ok(s) => s,
            Err(_) => continue, // colliding poles; redraw
        };
        // assemble the sum of the points
        let mut coords = vec![RatFun::zero(&ctx); group.coords.len()];
        for pt in &points {
            for (c, v) in coords.iter_mut().zip(pt) {
                *c = c.add(v).unwrap();
            }
        }
        let map = PointedCurveMap::new(group.clone(), coords.clone()).unwrap();
        let parts = pfd::group_pfd(&map, &support).unwrap();
        // re-summation
        let mut sum = vec![RatFun::zero(&ctx); group.coords.len()];
        for part in &parts {
            for (s, c) in sum.iter_mut().zip(&part.coords) {
                *s = s.add(c).unwrap();
            }
        }
        assert_eq!(sum, coords, "components must re-sum to the input");
        // the decomposition recovers the constituent points exactly
        for (part, pt) in parts.iter().zip(&points) {
            assert_eq!(&part.coords, pt, "component differs from the assembled point");
        }
        // idempotence: decomposing a component returns itself plus zeros
        let again = pfd::group_pfd(&parts[0], &support).unwrap();
        assert_eq!(again[0].coords, parts[0].coords);
        for other in &again[1..] {
            assert!(other.coords.iter().all(|c| c.is_zero()));
        }
        built += 1;
    }
    finish(
        4,
        "group PFD re-sums, is idempotent, pole-local, and group-closed on 100 assembled maps",
        t0,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_5_pairing() {
    let t0 = Instant::now();
    for (p, n, r) in [(2u64, 1u32, 2usize), (2, 2, 2), (3, 1, 2)] {
        let rep = identities::verify_pairing_membership(p, n, r, PairingMode::Rewrite, 0);
        assert_eq!(
            rep.verdict,
            Verdict::Verified,
            "pairing membership failed at (p,n,r)=({p},{n},{r})"
        );
    }
    let rep = identities::verify_pairing_explicit_212();
    assert_eq!(rep.verdict, Verdict::Verified, "explicit (2,1,2) identity");
    finish(
        5,
        "pairing multi-additivity + membership under rewriting; explicit (2,1,2) identity",
        t0,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_6_certification() {
    let t0 = Instant::now();
    for p in [2u64, 3] {
        for r in [1usize, 2] {
            let ctx = FieldContext::new(p, 1, r);
            let mut targets = vec![
                groups::make_group(Preset::V, &ctx, 1).unwrap(),
                groups::make_group(Preset::Vn, &ctx, 1).unwrap(),
                groups::make_group(Preset::Vn, &ctx, 2).unwrap(),
                groups::make_group(Preset::WeilAlphaP, &ctx, 1).unwrap(),
            ];
            if r == 1 {
                targets.push(groups::make_group(Preset::WeilResGm, &ctx, 1).unwrap());
            }
            for g in targets {
                let rep = ppoly::certify_wound_permawound(&g.equations[0]).unwrap();
                assert!(
                    rep.permawound,
                    "{} at p={p}, r={r} must certify permawound",
                    g.name
                );
                assert_eq!(rep.reduced, Certificate::Certified(true));
                assert_eq!(rep.universal, Certificate::Certified(true));
            }
        }
        // planted-collision negative control
        let (cert, zero) = identities::planted_collision_report(p).unwrap();
        assert_eq!(cert, Certificate::Certified(false));
        assert!(!zero.is_empty() && zero.iter().any(|x| !x.is_zero()));
    }
    finish(
        6,
        "V, V_n, and both Weil-restriction forms certify permawound; planted collision refuted with a zero",
        t0,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_7_moduli_identities() {
    let t0 = Instant::now();
    for p in [2u64, 3] {
        for n in 2..=3u32 {
            assert_eq!(
                identities::verify_largergp(p, n).verdict,
                Verdict::Verified,
                "largergp p={p} n={n}"
            );
        }
        for s in 1..=2u32 {
            assert_eq!(
                identities::verify_ws_transform(p, s, 2).verdict,
                Verdict::Verified,
                "ws_transform p={p} s={s}"
            );
            assert_eq!(
                identities::certify_nprime_nonsmooth(p, s, 2).verdict,
                Verdict::Verified,
                "nprime p={p} s={s}"
            );
            for m in 1..=2usize {
                assert_eq!(
                    identities::verify_uprime_rewrites(p, s, m).verdict,
                    Verdict::Verified,
                    "uprime p={p} s={s} m={m}"
                );
            }
        }
    }
    finish(
        7,
        "largergp (n ≤ 3), Ws transform + N' nonsmoothness (s ≤ 2, m = 2), U' rewrites (s ≤ 2), p ∈ {2,3}",
        t0,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_8_phi_surjection() {
    let t0 = Instant::now();
    let p = 2u64;
    for r in [1usize, 2] {
        for n in 1..=2u32 {
            assert!(
                groups::verify_phi_homomorphism(p, r, n),
                "φ_{n} additivity at r={r}"
            );
            assert!(
                groups::verify_hom_chi_pullback(p, r, n),
                "χ-pullback p-th-power property at r={r}, n={n}"
            );
            let (count, formula) = groups::phi_kernel_count(p as u32, r, n);
            assert_eq!(count, formula, "kernel coordinate count at r={r}, n={n}");
        }
    }
    // numeric sanity on points: the image of a V₂ point lands on V₁
    let ctx = FieldContext::new(2, 1, 1);
    let v2 = groups::make_group(Preset::Vn, &ctx, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let (cx, pt) = groups::random_point(&v2, &mut rng).unwrap();
    let vals: Vec<RatFun> = pt.into_iter().map(RatFun::constant).collect();
    let img = groups::apply_phi(&cx, 1, &vals).unwrap();
    let v1 = groups::make_group(Preset::Vn, &cx, 1).unwrap();
    assert!(groups::membership(&v1, &img).unwrap());
    finish(
        8,
        "φ_n homomorphism, χ-pullback p-th powers, kernel count p^{nr} − p^{(n−1)r} (p = 2, n ≤ 2, r ≤ 2)",
        t0,
        Duration::from_secs(30),
    );
}

/// Cross-module soundness drill: certificates survive a further substitution
/// and witnesses add (shared substitution ⇒ coordinates add).
#[test]
fn witness_algebra_stability() {
    let ctx = FieldContext::new(2, 1, 1);
    let lam = KElement::lambda(&ctx, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut coeffs = BTreeMap::new();
    coeffs.insert(0u64, random_element(&ctx, &mut rng, 1, 2));
    coeffs.insert(1u64, random_element(&ctx, &mut rng, 1, 2));
    let (cx, w) = cohokill::witness_pole_batch(&ctx, &coeffs, &lam, 1).unwrap();
    let q = UPoly::from_terms(
        &cx,
        vec![(2, KElement::one(&cx)), (0, lam.lift_to(&cx).unwrap())],
    );
    let mut num = UPoly::zero(&cx);
    for (l, b) in &coeffs {
        num = num.add(&UPoly::monomial(b.lift_to(&cx).unwrap(), *l));
    }
    let g = RatFun::new(num, q).unwrap();
    assert!(cohokill::verify_witness(&g, &w));
    // substitution stability
    let alpha2 = lam.lift_to(&cx).unwrap().add(&KElement::one(&cx));
    let w2 = w.substitute_further(&alpha2, 1).unwrap();
    assert!(cohokill::verify_witness(&g, &w2));
    // additivity: witnesses with the same substitution add
    let wsum = w.add(&w).unwrap();
    let gsum = g.add(&g).unwrap();
    assert!(cohokill::verify_witness(&gsum, &wsum));
    let _ = Witness::zero(&ctx, TargetForm::V);
}
