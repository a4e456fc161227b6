//! Acceptance suite. Each criterion prints one line with its verdict and
//! runtime against a pinned bound; run with `-- --nocapture` to see them.
//!
//! All comparisons are exact (integer, rational or cyclotomic), so there are
//! no numerical tolerances to pin; only the runtime bounds below.

use std::collections::{BTreeSet, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use sheet_atlas::exactalg::{reynolds, substitute, Cyclotomic, LaurentPolynomial};
use sheet_atlas::intmat::Rational;
use sheet_atlas::lattice_roots::{isogeny_kernel, IsogenyDescriptor, RootSystem, TypeLabel};
use sheet_atlas::pseudolevi::Frame;
use sheet_atlas::quotient::{invariant_generators_of_t, normality_report, restrict, SurjectivityStatus};
use sheet_atlas::sheets::{
    bullet_map, enumerate_dixmier_sheets, enumerate_sheets, orbit_space, weyl_of_sheet, RigidTable, SheetDescriptor,
};
use sheet_atlas::weyl::{weyl_order, WeylGroup};

const BOUND_CENSUS: Duration = Duration::from_secs(1);
const BOUND_SUBREGULAR_WS: Duration = Duration::from_secs(1);
const BOUND_RESTRICTIONS: Duration = Duration::from_secs(1);
const BOUND_NORMALITY: Duration = Duration::from_secs(5);
const BOUND_KERNELS: Duration = Duration::from_secs(10);
const BOUND_DICHOTOMY: Duration = Duration::from_secs(30);
const BOUND_PROPERTIES: Duration = Duration::from_secs(60);

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Runs a criterion, prints its line and returns whether it passed.
fn criterion(n: &str, name: &str, bound: Duration, body: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let result =
        result.and_then(|()| if elapsed <= bound { Ok(()) } else { Err(format!("took {elapsed:?}, bound {bound:?}")) });
    let verdict = if result.is_ok() { "PASS" } else { "FAIL" };
    let detail = result.as_ref().err().map(|e| format!(": {e}")).unwrap_or_default();
    println!("{verdict} [{n}] {name} ({} ms / {} ms){detail}", elapsed.as_millis(), bound.as_millis());
    result
}

fn setup(l: TypeLabel, r: usize, form: &str) -> (WeylGroup, IsogenyDescriptor) {
    let rs = RootSystem::new(l, r).unwrap();
    (WeylGroup::generate(&rs).unwrap(), IsogenyDescriptor::named(&rs, form).unwrap())
}

fn find<'a>(sheets: &'a [SheetDescriptor], id: &str) -> &'a SheetDescriptor {
    sheets.iter().find(|s| s.id == id).unwrap_or_else(|| panic!("no sheet {id}"))
}

fn t_poly(terms: &[(i64, i64)]) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(1, terms.iter().map(|&(e, c)| (vec![e], Cyclotomic::from_int(c))))
}

fn cli(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_sheet-atlas")).args(args).output().map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "{args:?} exited with {:?}", out.status.code());
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn census() -> Outcome {
    let doc = cli(&["enumerate", "--type", "G2"])?;
    let pls = doc["pseudo_levis"].as_array().ok_or("no pseudo_levis")?;
    let got: Vec<(String, String)> = pls
        .iter()
        .map(|p| (p["nodes_text"].as_str().unwrap_or("").to_string(), p["type"].as_str().unwrap_or("").to_string()))
        .collect();
    // α = α1 is short, β = α2 long; ~A1 is the short-root A1
    let expected =
        [("∅", "∅"), ("{α1}", "~A1"), ("{α2}", "A1"), ("{α0, α1}", "A1×~A1"), ("{α0, α2}", "A2"), ("{α1, α2}", "G2")];
    ensure!(got.iter().map(|(a, b)| (a.as_str(), b.as_str())).eq(expected.iter().copied()), "classes {got:?}");
    let sheets = doc["sheets"].as_array().ok_or("no sheets")?;
    ensure!(sheets.len() == 8, "{} sheets", sheets.len());
    Ok(())
}

fn subregular_ws() -> Outcome {
    let (w, x) = setup(TypeLabel::G, 2, "adjoint");
    let frame = Frame::new(&w, &x);
    let sheets = enumerate_sheets(&w, &x, &RigidTable::builtin()).map_err(|e| e.to_string())?;
    let rs = w.root_system();
    let refl = |v: [i64; 2]| w.reflection(rs.root_index(&v).expect("root"));
    for (id, gens) in [("1.0.0", [[1, 0], [3, 2]]), ("2.0.0", [[0, 1], [2, 1]])] {
        let data = weyl_of_sheet(&frame, find(&sheets, id));
        let expected = w.closure(&[refl(gens[0]), refl(gens[1])]);
        ensure!(data.ws.order() == 4, "{id}: order {}", data.ws.order());
        ensure!(data.ws == expected, "{id}: element sets differ");
    }
    Ok(())
}

fn restrictions() -> Outcome {
    let (w, x) = setup(TypeLabel::G, 2, "adjoint");
    let frame = Frame::new(&w, &x);
    let sheets = enumerate_sheets(&w, &x, &RigidTable::builtin()).map_err(|e| e.to_string())?;
    let f = invariant_generators_of_t(&frame).map_err(|e| e.to_string())?;
    let s1 = &find(&sheets, "1.0.0").coset;
    let s2 = &find(&sheets, "2.0.0").coset;
    let want_s1 = t_poly(&[(0, 2), (1, 2), (-1, 2)]);
    let want_s2 = [t_poly(&[(2, 1), (-2, 1), (1, 2), (-1, 2)]), t_poly(&[(0, 2), (3, 2), (-3, 2)])];
    let got = restrict(&f[0], s1);
    ensure!(got == want_s1, "ρ(f1) on S1 is {got}");
    for (i, want) in want_s2.iter().enumerate() {
        let got = restrict(&f[i], s2);
        ensure!(got == *want, "ρ(f{}) on S2 is {got}", i + 1);
    }
    Ok(())
}

fn normality() -> Outcome {
    let (w, x) = setup(TypeLabel::G, 2, "adjoint");
    let frame = Frame::new(&w, &x);
    let sheets = enumerate_sheets(&w, &x, &RigidTable::builtin()).map_err(|e| e.to_string())?;
    let report = |id: &str| {
        let s = find(&sheets, id);
        normality_report(&frame, s, &weyl_of_sheet(&frame, s), None).map_err(|e| e.to_string())
    };
    for id in ["0.0.0", "1.0.0"] {
        let r = report(id)?;
        ensure!(r.verdict.status == SurjectivityStatus::Surjective, "{id}: {:?}", r.verdict.status);
        ensure!(!r.target_generators.is_empty(), "{id}: no targets");
        for (c, t) in r.verdict.certificates.iter().zip(&r.target_generators) {
            let c = c.as_ref().ok_or_else(|| format!("{id}: missing certificate for {t}"))?;
            ensure!(c.verify(&r.image_generators, t), "{id}: certificate for {t} does not expand");
        }
    }
    let r = report("2.0.0")?;
    ensure!(r.verdict.status == SurjectivityStatus::NotSurjective, "S2: {:?}", r.verdict.status);
    let wt = r.verdict.witness.as_ref().ok_or("S2: no witness")?;
    ensure!(wt.verify(&r.image_generators, &r.target_generators), "S2: witness does not verify");
    let y = t_poly(&[(1, 1), (-1, 1)]);
    ensure!(r.target_generators[wt.target_index] == y, "S2: witness target is not t + t^-1");
    ensure!(wt.target_value == Cyclotomic::from_int(-1), "S2: y = {} at the witness", wt.target_value);
    Ok(())
}

/// Subgroup of `(Q/Z)^r` generated by `gens`.
fn generated(gens: &[Vec<Rational>]) -> BTreeSet<Vec<Rational>> {
    let reduce = |v: Vec<Rational>| v.into_iter().map(|q| q - q.floor()).collect::<Vec<_>>();
    let zero = vec![Rational::from_integer(0); gens[0].len()];
    let mut seen = BTreeSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = reduce(p.iter().zip(g).map(|(a, b)| *a + *b).collect());
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen
}

fn kernels() -> Outcome {
    let h = Rational::new(1, 2);
    let z = Rational::from_integer(0);
    let q = |n| Rational::new(n, 4);
    let rows: [(TypeLabel, usize, &str, Vec<Vec<Rational>>); 5] = [
        (TypeLabel::B, 4, "SO", vec![vec![z, z, z, h]]),
        (TypeLabel::C, 5, "PSp", vec![vec![h, z, h, z, h]]),
        (TypeLabel::D, 4, "SO", vec![vec![z, z, h, h]]),
        (TypeLabel::D, 4, "HSpin", vec![vec![h, z, h, z]]),
        (TypeLabel::D, 5, "PSO", vec![vec![h, z, h, q(1), q(3)]]),
    ];
    for (l, r, form, gens) in rows {
        let rs = RootSystem::new(l, r).unwrap();
        let x = IsogenyDescriptor::named(&rs, form).map_err(|e| e.to_string())?;
        let got: BTreeSet<Vec<Rational>> = isogeny_kernel(&rs, &x).iter().map(|p| p.finite_part().to_vec()).collect();
        let want = generated(&gens);
        ensure!(got == want, "{form} {l}{r}: kernel {got:?}, expected {want:?}");
        ensure!(got.len() as u64 == x.index(), "{form} {l}{r}: |kernel| ≠ [Λ:X]");
    }
    Ok(())
}

/// Facts about `Π = {α0, α1, α4, α5}` in `C5`, and the literal statement
/// that `W(S) = W_Π` for the simply connected group, which does not hold.
struct Dichotomy {
    facts: Outcome,
    literal: Outcome,
}

fn dichotomy() -> Dichotomy {
    let data = |form: &str| {
        let (w, x) = setup(TypeLabel::C, 5, form);
        let sheets = enumerate_dixmier_sheets(&w, &x);
        let s = sheets.iter().find(|s| s.nodes() == [0, 1, 4, 5]).expect("Π occurs").clone();
        let d = weyl_of_sheet(&Frame::new(&w, &x), &s);
        (w, d)
    };
    let (w, sc) = data("sc");
    let (_, ad) = data("adjoint");
    let facts = (|| {
        ensure!(w.order() == 3840, "|W| = {}", w.order());
        ensure!(sc.w_pi == ad.w_pi && sc.w_pi.order() == 64, "|W_Π| = {}", sc.w_pi.order());
        let semidirect = w.product_set(&ad.w_pi, &ad.w_upper_pi);
        ensure!(ad.ws == semidirect, "adjoint W(S) ≠ W_Π⋊W^Π");
        ensure!(ad.factorization_unique, "adjoint factorization not unique");
        ensure!(sc.ws.is_subset_of(&ad.ws) && ad.ws.order() == 2 * sc.ws.order(), "sc W(S) is not of index 2");
        Ok(())
    })();
    let literal = if sc.ws == sc.w_pi {
        Ok(())
    } else {
        Err(format!("sc W(S) has order {}, W_Π has order {}", sc.ws.order(), sc.w_pi.order()))
    };
    Dichotomy { facts, literal }
}

/// Orbit of a root under the simple reflections, computed from the bilinear
/// form alone.
fn root_orbit_by_reflection(rs: &RootSystem, root: &[i64]) -> HashSet<Vec<i64>> {
    let r = rs.rank();
    let simple: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen = HashSet::from([root.to_vec()]);
    let mut frontier = vec![root.to_vec()];
    while let Some(v) = frontier.pop() {
        for a in &simple {
            let c = 2 * rs.inner(&v, a) / rs.inner(a, a);
            let img: Vec<i64> = v.iter().zip(a).map(|(x, y)| x - c * y).collect();
            if seen.insert(img.clone()) {
                frontier.push(img);
            }
        }
    }
    seen
}

fn properties() -> Outcome {
    let groups = [
        (TypeLabel::G, 2),
        (TypeLabel::B, 2),
        (TypeLabel::C, 2),
        (TypeLabel::B, 3),
        (TypeLabel::C, 3),
        (TypeLabel::A, 3),
    ];
    for (l, r) in groups {
        for form in ["sc", "adjoint"] {
            let (w, x) = setup(l, r, form);
            let frame = Frame::new(&w, &x);
            for s in enumerate_dixmier_sheets(&w, &x) {
                let data = weyl_of_sheet(&frame, &s);
                let tag = format!("{l}{r} {form} {}", s.id);
                // (a) W_Π ∩ (W^Π)_{Z°s} = 1, so each element factors once
                let meet = data.w_pi.elements().iter().filter(|&&e| data.coset_stabilizer.contains(e)).count();
                ensure!(meet == 1 && data.factorization_unique, "{tag}: factorization not unique");
                ensure!(data.ws.order() == data.w_pi.order() * data.coset_stabilizer.order(), "{tag}: |W(S)|");
                // (b) bullet is a homomorphism on generators
                let os = orbit_space(&frame, &s, &data);
                ensure!(os.group_law_verified, "{tag}: image not a group");
                for &a in data.ws.elements() {
                    for &g in &data.generators {
                        let lhs = bullet_map(&frame, &s.coset, w.mul(a, g)).ok_or("bullet undefined")?;
                        let rhs = bullet_map(&frame, &s.coset, a)
                            .zip(bullet_map(&frame, &s.coset, g))
                            .map(|(p, q)| p.compose(&q))
                            .ok_or("bullet undefined")?;
                        ensure!(lhs == rhs, "{tag}: bullet({a}·{g}) ≠ bullet({a})∘bullet({g})");
                    }
                }
            }
        }
    }

    // (c) G2: restricted orbit sums are invariant, Reynolds is idempotent
    let (w, x) = setup(TypeLabel::G, 2, "adjoint");
    let frame = Frame::new(&w, &x);
    let sums = invariant_generators_of_t(&frame).map_err(|e| e.to_string())?;
    for s in enumerate_dixmier_sheets(&w, &x) {
        let os = orbit_space(&frame, &s, &weyl_of_sheet(&frame, &s));
        for f in &sums {
            let p = restrict(f, &s.coset);
            for g in &os.group {
                let moved = substitute(&p, g).map_err(|e| e.to_string())?;
                ensure!(moved == p, "G2 {}: ρ(f) not invariant under {g}", s.id);
            }
            let once = reynolds(&p, &os.group).map_err(|e| e.to_string())?;
            ensure!(once == p, "G2 {}: Reynolds moves an invariant", s.id);
        }
        let k = os.dim;
        for e in (0..3i64.pow(k as u32)).map(|n| (0..k).map(|i| (n / 3i64.pow(i as u32)) % 3 - 1).collect::<Vec<_>>()) {
            let m = LaurentPolynomial::monomial(e, Cyclotomic::one());
            let once = reynolds(&m, &os.group).map_err(|e| e.to_string())?;
            let twice = reynolds(&once, &os.group).map_err(|e| e.to_string())?;
            ensure!(once == twice, "G2 {}: Reynolds not idempotent on {m}", s.id);
        }
    }

    // (d) orbit-stabilizer on random roots
    let types = [
        (TypeLabel::A, 4),
        (TypeLabel::B, 4),
        (TypeLabel::C, 4),
        (TypeLabel::D, 4),
        (TypeLabel::F, 4),
        (TypeLabel::G, 2),
        (TypeLabel::B, 3),
        (TypeLabel::A, 2),
    ];
    let weyls: Vec<WeylGroup> =
        types.iter().map(|&(l, r)| WeylGroup::generate(&RootSystem::new(l, r).unwrap()).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let i = rng.gen_range(0..types.len());
        let w = &weyls[i];
        let rs = w.root_system();
        let root = rng.gen_range(0..rs.roots().len());
        let orbit = w.root_orbit(root);
        let stab = w.root_stabilizer(root);
        let (l, r) = types[i];
        ensure!(w.order() as u128 == weyl_order(l, r), "{l}{r}: |W|");
        ensure!(orbit.len() * stab.order() == w.order(), "{l}{r} root {root}: |orbit|·|stab| ≠ |W|");
        ensure!(orbit.len() == root_orbit_by_reflection(rs, rs.root(root)).len(), "{l}{r} root {root}: orbit size");
    }

    // (e) the S1 action has exactly two fixed points
    let sheets = enumerate_dixmier_sheets(&w, &x);
    let s1 = find(&sheets, "1.0.0");
    let os = orbit_space(&frame, s1, &weyl_of_sheet(&frame, s1));
    let nontrivial: Vec<_> = os.group.iter().filter(|g| !g.is_identity()).collect();
    ensure!(nontrivial.len() == 1, "S1 image has {} elements", os.group.len());
    ensure!(nontrivial[0].fixed_point_count() == Some(2), "fixed points {:?}", nontrivial[0].fixed_point_count());
    Ok(())
}

const DICHOTOMY_DEVIATION: &str = "sc W(S) has order 128, W_Π has order 64";

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    let mut record = |n: &'static str, r: Outcome| {
        if r.is_err() {
            failed.push(n);
        }
    };
    record("1", criterion("1", "G2 census: 6 pseudo-Levi classes, 8 sheets", BOUND_CENSUS, census));
    record("2", criterion("2", "W(S) of the subregular G2 sheets", BOUND_SUBREGULAR_WS, subregular_ws));
    record("3", criterion("3", "restrictions of f1, f2 to S1 and S2", BOUND_RESTRICTIONS, restrictions));
    record("4", criterion("4", "normality verdicts for S0, S1, S2", BOUND_NORMALITY, normality));
    record("5", criterion("5", "isogeny kernels of SO9, PSp10, SO8, HSpin8, PSO10", BOUND_KERNELS, kernels));

    let mut literal = None;
    record(
        "6",
        criterion("6", "C5 {α0,α1,α4,α5}: adjoint W(S) = W_Π⋊W^Π, index 2 over sc", BOUND_DICHOTOMY, || {
            let d = dichotomy();
            literal = Some(d.literal);
            d.facts
        }),
    );
    let literal = literal.expect("criterion 6 ran");
    let literal = criterion("6*", "C5 {α0,α1,α4,α5}: sc W(S) = W_Π (computed in 6)", BOUND_DICHOTOMY, || literal);
    // the literal statement is false; see the README
    assert_eq!(literal, Err(DICHOTOMY_DEVIATION.to_string()), "criterion 6* changed outcome");

    record("7", criterion("7", "property suites (a)-(e)", BOUND_PROPERTIES, properties));
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
#[ignore = "the simply connected W(S) is W_Π extended by an order-2 element; kept to document the deviation"]
fn dichotomy_literal_sc_ws_equals_w_pi() {
    let d = dichotomy();
    d.facts.unwrap();
    d.literal.unwrap();
}
