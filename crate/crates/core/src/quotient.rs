//! Normality of the categorical quotient of a sheet closure: restriction of
//! `W`-invariant orbit sums to a shifted torus, invariants of the bullet
//! action, and a degree-bounded test of surjectivity with exact certificates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactalg::{
    reynolds, solve_in_span, totient, Cyclotomic, LaurentPolynomial, MonomialAffineMap, RootOfUnity,
};
use crate::intmat::IVec;
use crate::pseudolevi::{render_coroot_product, Frame, ShiftedTorus};
use crate::sheets::{orbit_space, OrbitSpace, SheetDescriptor, SheetWeylData};

/// `Σ_{μ ∈ Wλ} e^μ` for a dominant `λ ∈ X`, as a Laurent polynomial whose
/// exponents are `X`-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSum {
    /// `λ` in fundamental-weight coordinates.
    pub weight: IVec,
    /// The orbit in fundamental-weight coordinates, ascending.
    pub orbit: Vec<IVec>,
    pub poly: LaurentPolynomial,
}

impl OrbitSum {
    pub fn new(frame: &Frame<'_>, weight: &[i64]) -> Option<Self> {
        let cartan = frame.root_system().cartan();
        let r = frame.rank();
        frame.lattice.char_coords(weight)?;
        let mut orbit: BTreeSet<IVec> = BTreeSet::from([weight.to_vec()]);
        let mut frontier = vec![weight.to_vec()];
        while let Some(cur) = frontier.pop() {
            for i in 0..r {
                let next: IVec = (0..r).map(|k| cur[k] - cur[i] * cartan[k][i]).collect();
                if orbit.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        let terms =
            orbit.iter().map(|mu| (frame.lattice.char_coords(mu).expect("orbit stays in X"), Cyclotomic::one()));
        let poly = LaurentPolynomial::from_terms(r, terms);
        Some(Self { weight: weight.to_vec(), orbit: orbit.into_iter().collect(), poly })
    }

    /// Fixed by the substitution of every simple reflection.
    pub fn is_invariant(&self, frame: &Frame<'_>) -> bool {
        let w = frame.weyl;
        (0..frame.rank()).all(|i| {
            let s = w.simple_reflection(i);
            let map =
                MonomialAffineMap::new(vec![RootOfUnity::one(); frame.rank()], frame.y_matrix(w.inverse(s)).clone())
                    .expect("Weyl action is invertible");
            crate::exactalg::substitute(&self.poly, &map).is_ok_and(|p| p == self.poly)
        })
    }
}

const HILBERT_BOX_CAP: usize = 1 << 22;

/// Minimal generators of the monoid of dominant weights in `X`.
///
/// With `f = [Λ : X]` every `f·ω_i` lies in `X`, so an element with some
/// coordinate `≥ f` other than `f·ω_i` itself splits off `f·ω_i`; the search
/// in the box `0 ≤ λ_i ≤ f` is therefore complete.
pub fn dominant_monoid_generators(frame: &Frame<'_>) -> Result<Vec<IVec>> {
    let r = frame.rank();
    let f = frame.lattice.index() as usize;
    let size = (f + 1).checked_pow(r as u32).unwrap_or(usize::MAX);
    if size > HILBERT_BOX_CAP {
        return Err(Error::HeightBoundInsufficient { size, cap: HILBERT_BOX_CAP });
    }
    let mut points: Vec<IVec> = Vec::new();
    let mut cur = vec![0i64; r];
    loop {
        let mut i = 0;
        while i < r {
            cur[i] += 1;
            if cur[i] <= f as i64 {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
        if frame.lattice.contains(&cur) {
            points.push(cur.clone());
        }
    }
    points.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then_with(|| b.cmp(a)));
    let mut gens: Vec<IVec> = Vec::new();
    for h in points {
        let reducible = gens.iter().any(|g| {
            let d: IVec = h.iter().zip(g).map(|(a, b)| a - b).collect();
            d.iter().all(|&x| x >= 0) && frame.lattice.contains(&d)
        });
        if !reducible {
            gens.push(h);
        }
    }
    Ok(gens)
}

/// Orbit sums of the minimal generators of the dominant monoid of `X`;
/// they generate `C[X]^W`.
pub fn invariant_generators_of_t(frame: &Frame<'_>) -> Result<Vec<OrbitSum>> {
    Ok(dominant_monoid_generators(frame)?
        .iter()
        .map(|g| OrbitSum::new(frame, g).expect("generator lies in X"))
        .collect())
}

/// `e^μ ↦ μ(s)·∏ t_i^{⟨μ, y_i⟩}` on the coset `Z°s`.
pub fn restrict(orbit_sum: &OrbitSum, coset: &ShiftedTorus) -> LaurentPolynomial {
    let mut out = LaurentPolynomial::zero(coset.dim());
    for (chi, c) in orbit_sum.poly.terms() {
        out = &out + &coset.generic.eval_laurent(chi).scale(c);
    }
    out
}

/// Exponent vectors in `k` variables with `ℓ¹`-norm at most `d`, ascending.
fn monomials_up_to(k: usize, d: u32) -> Vec<IVec> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|e: IVec| {
                let used: u32 = e.iter().map(|x| x.unsigned_abs() as u32).sum();
                let rest = (d - used) as i64;
                (-rest..=rest).map(move |x| [e.clone(), vec![x]].concat())
            })
            .collect();
    }
    out.sort();
    out
}

fn sort_key(p: &LaurentPolynomial) -> (u32, Vec<IVec>, String) {
    (p.degree(), p.terms().rev().map(|(e, _)| e.clone()).collect(), p.to_string())
}

/// Generators of the invariants of a finite group of maps of the
/// `k`-dimensional torus: Reynolds averages of the monomials up to degree
/// `d`, made monic, reduced greedily in increasing degree. A candidate is
/// dropped when it is certified to lie in the algebra of the earlier ones.
pub fn coset_invariant_generators(k: usize, group: &[MonomialAffineMap], d: u32) -> Result<Vec<LaurentPolynomial>> {
    let mut candidates: Vec<LaurentPolynomial> = Vec::new();
    for e in monomials_up_to(k, d) {
        if e.iter().all(|&x| x == 0) {
            continue;
        }
        let avg = reynolds(&LaurentPolynomial::monomial(e, Cyclotomic::one()), group)?;
        if !avg.is_zero() {
            candidates.push(avg.monic());
        }
    }
    candidates.sort_by_key(sort_key);
    candidates.dedup();
    let mut kept: Vec<LaurentPolynomial> = Vec::new();
    for c in candidates {
        if certify_membership(&kept, &c, c.degree() + d).is_none() {
            kept.push(c);
        }
    }
    Ok(kept)
}

/// `target = Σ_a c_a ∏_i g_i^{a_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// The expression as a polynomial in the generators, variables `g1, g2, …`.
    pub expression: LaurentPolynomial,
}

impl Certificate {
    pub fn render(&self, prefix: &str) -> String {
        let names: Vec<String> = (0..self.expression.nvars()).map(|i| format!("{prefix}{}", i + 1)).collect();
        self.expression.to_string_with(&names)
    }

    /// Expands the expression and compares with the target exactly.
    pub fn verify(&self, generators: &[LaurentPolynomial], target: &LaurentPolynomial) -> bool {
        let mut sum = LaurentPolynomial::zero(target.nvars());
        for (a, c) in self.expression.terms() {
            let mut term = LaurentPolynomial::constant(target.nvars(), c.clone());
            for (g, &ai) in generators.iter().zip(a) {
                term = &term * &g.pow(ai as u32);
            }
            sum = &sum + &term;
        }
        sum == *target
    }
}

fn composite_degree(generators: &[LaurentPolynomial], a: &[i64]) -> u32 {
    generators.iter().zip(a).map(|(g, &x)| g.degree().max(1) * x as u32).sum()
}

/// Expresses `target` through products of `generators` of composite degree
/// `Σ a_i·deg g_i ≤ bound`, or `None` when it is not in their span.
pub fn certify_membership(
    generators: &[LaurentPolynomial],
    target: &LaurentPolynomial,
    bound: u32,
) -> Option<Certificate> {
    let m = generators.len();
    let k = target.nvars();
    let mut exps: Vec<IVec> = vec![vec![0; m]];
    for i in 0..m {
        let mut next = Vec::new();
        for e in exps {
            let mut e2 = e.clone();
            while composite_degree(generators, &e2) <= bound {
                next.push(e2.clone());
                e2[i] += 1;
            }
        }
        exps = next;
    }
    exps.sort();
    let products: Vec<LaurentPolynomial> = exps
        .iter()
        .map(|a| generators.iter().zip(a).fold(LaurentPolynomial::one(k), |acc, (g, &x)| &acc * &g.pow(x as u32)))
        .collect();
    let coeffs = solve_in_span(&products, target)?;
    let expression = LaurentPolynomial::from_terms(m, exps.into_iter().zip(coeffs).filter(|(_, c)| !c.is_zero()));
    Some(Certificate { expression })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurjectivityStatus {
    Surjective,
    NotSurjective,
    InconclusiveAtBound,
}

impl SurjectivityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Surjective => "surjective",
            Self::NotSurjective => "not_surjective",
            Self::InconclusiveAtBound => "inconclusive_at_bound",
        }
    }
}

/// A point where every image generator has zero differential but a target
/// generator does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialWitness {
    pub point: Vec<Cyclotomic>,
    /// The point as roots of unity, when it is one.
    pub roots_of_unity: Option<Vec<RootOfUnity>>,
    pub target_index: usize,
    pub target_value: Cyclotomic,
    pub target_gradient: Vec<Cyclotomic>,
}

impl DifferentialWitness {
    pub fn verify(&self, image: &[LaurentPolynomial], targets: &[LaurentPolynomial]) -> bool {
        let k = self.point.len();
        let flat = image.iter().all(|g| gradient(g, &self.point).is_some_and(|v| v.iter().all(Cyclotomic::is_zero)));
        let t = &targets[self.target_index];
        let steep = gradient(t, &self.point).is_some_and(|v| v.len() == k && v.iter().any(|c| !c.is_zero()));
        flat && steep && t.evaluate(&self.point).is_ok_and(|v| v == self.target_value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurjectivityVerdict {
    pub status: SurjectivityStatus,
    pub degree_bound: u32,
    /// One entry per target generator.
    pub certificates: Vec<Option<Certificate>>,
    pub witness: Option<DifferentialWitness>,
}

fn gradient(p: &LaurentPolynomial, point: &[Cyclotomic]) -> Option<Vec<Cyclotomic>> {
    (0..p.nvars()).map(|i| p.derivative(i).evaluate(point).ok()).collect()
}

/// Decides whether the algebra generated by `image` contains every target
/// generator, with membership tested up to composite degree `bound`.
pub fn surjectivity_test(
    image: &[LaurentPolynomial],
    targets: &[LaurentPolynomial],
    bound: u32,
) -> Result<SurjectivityVerdict> {
    let needed = image.iter().chain(targets).map(LaurentPolynomial::degree).max().unwrap_or(0);
    if bound < needed {
        return Err(Error::DegreeBoundTooSmall { bound, needed });
    }
    let certificates: Vec<Option<Certificate>> = targets.iter().map(|t| certify_membership(image, t, bound)).collect();
    if certificates.iter().all(Option::is_some) {
        return Ok(SurjectivityVerdict {
            status: SurjectivityStatus::Surjective,
            degree_bound: bound,
            certificates,
            witness: None,
        });
    }
    let failing: Vec<usize> = (0..targets.len()).filter(|&i| certificates[i].is_none()).collect();
    let witness = find_witness(image, targets, &failing);
    Ok(SurjectivityVerdict {
        status: if witness.is_some() {
            SurjectivityStatus::NotSurjective
        } else {
            SurjectivityStatus::InconclusiveAtBound
        },
        degree_bound: bound,
        certificates,
        witness,
    })
}

const GRID_CAP: u64 = 1 << 16;
const ROOT_ORDER_CAP: u64 = 4096;

fn find_witness(
    image: &[LaurentPolynomial],
    targets: &[LaurentPolynomial],
    failing: &[usize],
) -> Option<DifferentialWitness> {
    let k = targets.first().map_or(0, LaurentPolynomial::nvars);
    if k == 0 {
        return None;
    }
    let n = image.iter().chain(targets).fold(1u64, |acc, p| acc.lcm(&p.conductor()));
    let mut candidates: Vec<(Vec<Cyclotomic>, Option<Vec<RootOfUnity>>)> = Vec::new();
    if (n as u128).pow(k as u32) <= GRID_CAP as u128 {
        for e in grid(n, k) {
            let roots: Vec<RootOfUnity> = e.iter().map(|&j| RootOfUnity::from_fraction(j, n as i64)).collect();
            candidates.push((roots.iter().map(RootOfUnity::to_cyclotomic).collect(), Some(roots)));
        }
    }
    if k == 1 {
        let numerators: Vec<UPoly> = image.iter().map(|g| numerator(&g.derivative(0))).collect();
        let g = numerators.into_iter().fold(Vec::new(), |acc, p| upoly_gcd(&acc, &p));
        if !g.is_empty() && g.len() > 1 {
            candidates.extend(roots_in_torus(&g, n).into_iter().map(|(c, r)| (vec![c], r)));
        }
    }
    let mut seen = Vec::new();
    for (point, roots) in candidates {
        if seen.contains(&point) {
            continue;
        }
        seen.push(point.clone());
        let flat = image.iter().all(|g| gradient(g, &point).is_some_and(|v| v.iter().all(Cyclotomic::is_zero)));
        if !flat {
            continue;
        }
        for &i in failing {
            let grad = gradient(&targets[i], &point)?;
            if grad.iter().any(|c| !c.is_zero()) {
                let target_value = targets[i].evaluate(&point).ok()?;
                return Some(DifferentialWitness {
                    point,
                    roots_of_unity: roots,
                    target_index: i,
                    target_value,
                    target_gradient: grad,
                });
            }
        }
    }
    None
}

fn grid(n: u64, k: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out =
            out.into_iter().flat_map(|e: Vec<i64>| (0..n as i64).map(move |j| [e.clone(), vec![j]].concat())).collect();
    }
    out
}

/// Univariate polynomial, constant term first, no trailing zeros.
type UPoly = Vec<Cyclotomic>;

fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(Cyclotomic::is_zero) {
        p.pop();
    }
    p
}

/// `t^s·p(t)` with the least `s` making it a polynomial.
fn numerator(p: &LaurentPolynomial) -> UPoly {
    if p.is_zero() {
        return Vec::new();
    }
    let lo = p.min_exponents()[0];
    let hi = p.terms().map(|(e, _)| e[0]).max().unwrap_or(lo);
    let mut out = vec![Cyclotomic::zero(); (hi - lo + 1) as usize];
    for (e, c) in p.terms() {
        out[(e[0] - lo) as usize] = c.clone();
    }
    trim(out)
}

fn upoly_rem(a: &UPoly, b: &UPoly) -> UPoly {
    let mut r = a.clone();
    let lead_inv = b.last().expect("nonzero divisor").inv().expect("nonzero leading coefficient");
    while r.len() >= b.len() {
        let f = r.last().expect("nonempty") * &lead_inv;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&f * c);
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Monic greatest common divisor; the zero polynomial is the identity.
fn upoly_gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !y.is_empty() {
        let r = upoly_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last() {
        let inv = lead.inv().expect("nonzero");
        x = x.iter().map(|c| c * &inv).collect();
    }
    x
}

fn upoly_eval(p: &UPoly, x: &Cyclotomic) -> Cyclotomic {
    p.iter().rev().fold(Cyclotomic::zero(), |acc, c| &(&acc * x) + c)
}

/// Nonzero roots of `p` that are roots of unity or rational numbers.
///
/// A root of unity of order `m` that is a root of a degree `d` polynomial
/// over `Q(ζ_N)` has `φ(m) ≤ d·φ(N)`, and `φ(m) ≥ √(m/2)`.
fn roots_in_torus(p: &UPoly, n: u64) -> Vec<(Cyclotomic, Option<Vec<RootOfUnity>>)> {
    let d = (p.len() - 1) as u64;
    let phi_bound = d * totient(n);
    let max_order = (2 * phi_bound * phi_bound).min(ROOT_ORDER_CAP);
    let mut out = Vec::new();
    for m in 1..=max_order {
        if totient(m) > phi_bound {
            continue;
        }
        for j in 0..m as i64 {
            if j.gcd(&(m as i64)) != 1 && m > 1 {
                continue;
            }
            let z = RootOfUnity::from_fraction(j, m as i64);
            if upoly_eval(p, &z.to_cyclotomic()).is_zero() {
                out.push((z.to_cyclotomic(), Some(vec![z])));
            }
        }
    }
    for q in rational_roots(p) {
        if q.abs() != BigRational::one() {
            out.push((Cyclotomic::from_rational(q), None));
        }
    }
    out
}

const DIVISOR_CAP: i64 = 1 << 20;

fn rational_roots(p: &UPoly) -> Vec<BigRational> {
    let Some(coeffs) = p.iter().map(Cyclotomic::as_rational).collect::<Option<Vec<BigRational>>>() else {
        return Vec::new();
    };
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let (Some(a0), Some(an)) =
        (ints.first().and_then(|x| x.abs().to_i64()), ints.last().and_then(|x| x.abs().to_i64()))
    else {
        return Vec::new();
    };
    if a0 == 0 || a0 > DIVISOR_CAP || an > DIVISOR_CAP {
        return Vec::new();
    }
    let divisors = |x: i64| (1..=x).filter(move |d| x % d == 0);
    let mut out = BTreeSet::new();
    for num in divisors(a0) {
        for den in divisors(an) {
            for sign in [1, -1] {
                let q = BigRational::new(BigInt::from(sign * num), BigInt::from(den));
                let v = upoly_eval(p, &Cyclotomic::from_rational(q.clone()));
                if v.is_zero() {
                    out.insert(q);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Normalisation presentation, generators on both sides, and the verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalityReport {
    pub sheet_id: String,
    pub orbit_space: OrbitSpace,
    pub image_generators: Vec<LaurentPolynomial>,
    pub target_generators: Vec<LaurentPolynomial>,
    pub target_search_degree: u32,
    pub verdict: SurjectivityVerdict,
    /// The witness as a point of the coset, in simple-coroot form.
    pub witness_point: Option<String>,
}

impl NormalityReport {
    pub fn is_normal(&self) -> Option<bool> {
        match self.verdict.status {
            SurjectivityStatus::Surjective => Some(true),
            SurjectivityStatus::NotSurjective => Some(false),
            SurjectivityStatus::InconclusiveAtBound => None,
        }
    }
}

/// `2·(max target degree) + (max image degree)`.
pub fn default_degree_bound(image: &[LaurentPolynomial], targets: &[LaurentPolynomial]) -> u32 {
    let max = |ps: &[LaurentPolynomial]| ps.iter().map(LaurentPolynomial::degree).max().unwrap_or(0);
    2 * max(targets) + max(image)
}

pub fn normality_report(
    frame: &Frame<'_>,
    sheet: &SheetDescriptor,
    data: &SheetWeylData,
    degree_bound: Option<u32>,
) -> Result<NormalityReport> {
    if !sheet.is_dixmier() {
        return Err(Error::NotDixmier(sheet.label_string()));
    }
    let os = orbit_space(frame, sheet, data);
    let image: Vec<LaurentPolynomial> =
        invariant_generators_of_t(frame)?.iter().map(|f| restrict(f, &sheet.coset)).collect();
    let target_search_degree = image.iter().map(LaurentPolynomial::degree).max().unwrap_or(0).max(1);
    let targets =
        if os.dim == 0 { Vec::new() } else { coset_invariant_generators(os.dim, &os.group, target_search_degree)? };
    let bound = degree_bound.unwrap_or_else(|| default_degree_bound(&image, &targets));
    let verdict = surjectivity_test(&image, &targets, bound)?;
    let witness_point = verdict
        .witness
        .as_ref()
        .and_then(|w| w.roots_of_unity.as_ref())
        .map(|r| render_coroot_product(frame.lattice, &sheet.coset.point_at(r)));
    Ok(NormalityReport {
        sheet_id: sheet.id.clone(),
        orbit_space: os,
        image_generators: image,
        target_generators: targets,
        target_search_degree,
        verdict,
        witness_point,
    })
}
