//! Unitarity of finitely generated subgroups of GL(2,ℂ).
//!
//! A group `G` is unitary when some nondegenerate Hermitian `H` (not
//! necessarily definite) satisfies `g†Hg = H` for every `g ∈ G`. The decision
//! procedure works on the rescaled generators `g/√det g`:
//!
//! | case                 | unitary iff               |
//! |----------------------|---------------------------|
//! | scalar               | always (`dim A = 1`)      |
//! | abelian, reducible   | `dim A = 2`               |
//! | nonabelian reducible | `dim A = 3`               |
//! | irreducible          | real trace conditions     |
//!
//! where `A` is the real algebra spanned by products of generators. Every
//! positive answer is backed by an explicit form that is checked against all
//! generators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{form_action, vec_norm, wedge, HermitianForm, Mat2, Vec2};
use crate::monodromy::HeunParams;
use crate::{c64, C64};

/// A nonempty ordered list of invertible generators.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GeneratorSet {
    gens: Vec<Mat2>,
}

impl GeneratorSet {
    pub fn new(gens: Vec<Mat2>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        for g in &gens {
            let d = g.det().norm();
            if !g.is_finite() || d <= crate::linalg::SINGULAR_TOL {
                return Err(Error::SingularMatrix { det_abs: d });
            }
        }
        Ok(GeneratorSet { gens })
    }

    pub fn gens(&self) -> &[Mat2] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Generators divided by `√det` (principal branch).
    pub fn rescaled(&self) -> Vec<Mat2> {
        self.gens
            .iter()
            .map(|g| g.sqrt_det_rescale().expect("validated invertible"))
            .collect()
    }

    /// The same group conjugated by `t` (each `g ↦ t⁻¹gt`).
    pub fn conjugated(&self, t: &Mat2) -> Result<Self> {
        let ti = t.inverse()?;
        GeneratorSet::new(self.gens.iter().map(|g| ti * *g * *t).collect())
    }
}

impl<'de> Deserialize<'de> for GeneratorSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let gens: Vec<Mat2> = Vec::deserialize(d)?;
        GeneratorSet::new(gens).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupCase {
    Scalar,
    AbelianReducible,
    NonabelianReducible,
    Irreducible,
}

impl GroupCase {
    /// Algebra dimension a unitary group in this case must have.
    pub fn unitary_dim(self) -> usize {
        match self {
            GroupCase::Scalar => 1,
            GroupCase::AbelianReducible => 2,
            GroupCase::NonabelianReducible => 3,
            GroupCase::Irreducible => 4,
        }
    }
}

/// Outcome of [`classify`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub case: GroupCase,
    pub unitary: bool,
    pub algebra_dim: usize,
    pub form: Option<HermitianForm>,
    /// Conjugating matrix `N` such that `N⁻¹gN` lies in the model group.
    pub normalizer: Option<Mat2>,
    pub det_modulus_ok: bool,
}

/// Tolerances used by [`classify`]. Each is applied relative to the natural
/// scale of the quantity it tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyOptions {
    /// `||det g| − 1|` bound.
    pub det_tol: f64,
    /// `‖[g,h]‖ ≤ commute_tol·max(1, ‖g‖‖h‖)` means commuting.
    pub commute_tol: f64,
    /// `|Im tr w| ≤ trace_tol·max(1, |tr w|)` means real.
    pub trace_tol: f64,
    /// Relative rank threshold inside the algebra-dimension iteration.
    pub rank_tol: f64,
    /// Bound on `‖g†Hg − H‖/‖H‖`.
    pub preserve_tol: f64,
    /// `|det H|` below this rejects the form.
    pub degeneracy_tol: f64,
    /// Relative bound for eigen-direction and parabolic decisions.
    pub eigen_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            det_tol: 1e-8,
            commute_tol: 1e-8,
            trace_tol: 1e-8,
            rank_tol: 1e-9,
            preserve_tol: 1e-8,
            degeneracy_tol: 1e-10,
            eigen_tol: 1e-8,
        }
    }
}

impl ClassifyOptions {
    /// Uniformly loosened tolerances for matrices known only to accuracy `tol`,
    /// e.g. numerically integrated monodromy.
    pub fn with_tolerance(tol: f64) -> Self {
        ClassifyOptions {
            det_tol: tol,
            commute_tol: tol,
            trace_tol: tol,
            rank_tol: tol,
            preserve_tol: tol,
            degeneracy_tol: 1e-10,
            eigen_tol: tol,
        }
    }
}

/// A preserved form together with the basis change that exhibits it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormWitness {
    pub form: HermitianForm,
    pub normalizer: Mat2,
}

fn is_real(z: C64, tol: f64) -> bool {
    z.im.abs() <= tol * z.norm().max(1.0)
}

fn commutes(g: &Mat2, h: &Mat2, tol: f64) -> bool {
    g.commutator(h).norm() <= tol * (g.norm() * h.norm()).max(1.0)
}

fn is_scalar_gen(g: &Mat2, tol: f64) -> bool {
    g.is_scalar(tol)
}

/// Whether `v` is an eigenvector of `g` up to relative tolerance.
fn fixes_direction(g: &Mat2, v: &Vec2, tol: f64) -> bool {
    let gv = g.apply(*v);
    wedge(&gv, v).norm() <= tol * g.norm().max(1.0) * vec_norm(v) * vec_norm(v)
}

/// A unit vector that is an eigenvector of every generator, if one exists.
pub fn common_eigenvector(gens: &[Mat2], tol: f64) -> Option<Vec2> {
    let Some(anchor) = gens.iter().find(|g| !is_scalar_gen(g, tol)) else {
        return Some([c64(1.0, 0.0), c64(0.0, 0.0)]);
    };
    let e = anchor.eigen_with_tol(tol);
    let candidates: &[Vec2] = if e.defective { &[e.v1][..] } else { &[e.v1, e.v2][..] };
    candidates
        .iter()
        .copied()
        .find(|v| gens.iter().all(|g| fixes_direction(g, v, tol)))
}

/// True iff no common eigenvector exists among the generators.
pub fn is_irreducible(s: &GeneratorSet) -> bool {
    is_irreducible_with(s.gens(), ClassifyOptions::default().eigen_tol)
}

pub fn is_irreducible_with(gens: &[Mat2], tol: f64) -> bool {
    common_eigenvector(gens, tol).is_none()
}

/// True iff all pairs of generators commute.
pub fn is_abelian(gens: &[Mat2], tol: f64) -> bool {
    gens.iter()
        .enumerate()
        .all(|(i, g)| gens[i + 1..].iter().all(|h| commutes(g, h, tol)))
}

/// Dimension over ℝ of the algebra generated by `{I} ∪ gens`.
pub fn real_algebra_dim(gens: &[Mat2]) -> usize {
    real_algebra_dim_with(gens, ClassifyOptions::default().rank_tol)
}

pub fn real_algebra_dim_with(gens: &[Mat2], tol: f64) -> usize {
    let mut basis: Vec<[f64; 8]> = Vec::with_capacity(8);
    absorb(&mut basis, &Mat2::identity(), tol);
    for g in gens {
        absorb(&mut basis, g, tol);
    }
    for _round in 0..8 {
        let before = basis.len();
        if before == 8 {
            break;
        }
        let mats: Vec<Mat2> = basis.iter().map(Mat2::from_real8).collect();
        for x in &mats {
            for y in &mats {
                absorb(&mut basis, &(*x * *y), tol);
                if basis.len() == 8 {
                    return 8;
                }
            }
        }
        if basis.len() == before {
            break;
        }
    }
    basis.len()
}

/// Adds the component of `m` orthogonal to `basis`, if it is significant.
fn absorb(basis: &mut Vec<[f64; 8]>, m: &Mat2, tol: f64) -> bool {
    let v0 = m.to_real8();
    let n0 = norm8(&v0);
    if n0 == 0.0 {
        return false;
    }
    let mut v = v0;
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for b in basis.iter() {
            let d = dot8(&v, b);
            for k in 0..8 {
                v[k] -= d * b[k];
            }
        }
    }
    let n = norm8(&v);
    if n <= tol * n0.max(1.0) {
        return false;
    }
    for x in v.iter_mut() {
        *x /= n;
    }
    basis.push(v);
    true
}

fn dot8(a: &[f64; 8], b: &[f64; 8]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn norm8(a: &[f64; 8]) -> f64 {
    dot8(a, a).sqrt()
}

/// All seven Fricke traces `tr P, Q, R, PQ, QR, PR, PQR` have `|Im| ≤ 1e-8`.
pub fn seven_trace_test(p: &Mat2, q: &Mat2, r: &Mat2) -> bool {
    seven_trace_test_with(p, q, r, 1e-8)
}

/// [`seven_trace_test`] with an absolute tolerance.
pub fn seven_trace_test_with(p: &Mat2, q: &Mat2, r: &Mat2, tol: f64) -> bool {
    fricke_traces(p, q, r).iter().all(|t| t.im.abs() <= tol)
}

/// `[tr P, tr Q, tr R, tr PQ, tr QR, tr PR, tr PQR]`.
pub fn fricke_traces(p: &Mat2, q: &Mat2, r: &Mat2) -> [C64; 7] {
    [
        p.trace(),
        q.trace(),
        r.trace(),
        (*p * *q).trace(),
        (*q * *r).trace(),
        (*p * *r).trace(),
        (*p * *q * *r).trace(),
    ]
}

/// The irreducible-case trace conditions over the (rescaled) generators:
/// every `tr g`, every `tr gh` real, and for every triple either `tr PQR` or
/// `tr PRQ` real. Triples and pairs range over `S` with repetition.
pub fn trace_conditions(gens: &[Mat2], tol: f64) -> bool {
    for p in gens {
        if !is_real(p.trace(), tol) {
            return false;
        }
    }
    for p in gens {
        for q in gens {
            if !is_real((*p * *q).trace(), tol) {
                return false;
            }
        }
    }
    for p in gens {
        for q in gens {
            let pq = *p * *q;
            for r in gens {
                let pqr = (pq * *r).trace();
                if is_real(pqr, tol) {
                    continue;
                }
                if !is_real((*p * *r * *q).trace(), tol) {
                    return false;
                }
            }
        }
    }
    true
}

/// Decides unitarity with default tolerances.
pub fn classify(s: &GeneratorSet) -> Result<Classification> {
    classify_with(s, &ClassifyOptions::default())
}

/// Determines case, algebra dimension and unitarity; when unitary, attaches
/// a verified preserved form expressed in the original basis.
pub fn classify_with(s: &GeneratorSet, opts: &ClassifyOptions) -> Result<Classification> {
    let det_modulus_ok = s
        .gens()
        .iter()
        .all(|g| (g.det().norm() - 1.0).abs() <= opts.det_tol);
    let gens = s.rescaled();
    let case = group_case(&gens, opts);
    let algebra_dim = real_algebra_dim_with(&gens, opts.rank_tol);

    let structurally_unitary = match case {
        GroupCase::Irreducible => trace_conditions(&gens, opts.trace_tol),
        c => algebra_dim == c.unitary_dim(),
    };
    let mut out = Classification {
        case,
        unitary: false,
        algebra_dim,
        form: None,
        normalizer: None,
        det_modulus_ok,
    };
    if !(det_modulus_ok && structurally_unitary) {
        return Ok(out);
    }
    let w = form_for_case(case, &gens, opts)?;
    verify_form(&w.form, s.gens(), opts)?;
    out.unitary = true;
    out.form = Some(w.form);
    out.normalizer = Some(w.normalizer);
    Ok(out)
}

fn group_case(gens: &[Mat2], opts: &ClassifyOptions) -> GroupCase {
    if gens.iter().all(|g| is_scalar_gen(g, opts.eigen_tol)) {
        GroupCase::Scalar
    } else if is_abelian(gens, opts.commute_tol) {
        GroupCase::AbelianReducible
    } else if is_irreducible_with(gens, opts.eigen_tol) {
        GroupCase::Irreducible
    } else {
        GroupCase::NonabelianReducible
    }
}

/// Builds the preserved form of a group already known to be unitary.
///
/// Runs [`classify`] first and fails with [`Error::NotUnitary`] when it says
/// no.
pub fn construct_form(s: &GeneratorSet) -> Result<FormWitness> {
    construct_form_with(s, &ClassifyOptions::default())
}

pub fn construct_form_with(s: &GeneratorSet, opts: &ClassifyOptions) -> Result<FormWitness> {
    let c = classify_with(s, opts)?;
    match (c.unitary, c.form, c.normalizer) {
        (true, Some(form), Some(normalizer)) => Ok(FormWitness { form, normalizer }),
        _ => Err(Error::NotUnitary(format!(
            "{:?} group with algebra dimension {}",
            c.case, c.algebra_dim
        ))),
    }
}

fn verify_form(h: &HermitianForm, gens: &[Mat2], opts: &ClassifyOptions) -> Result<()> {
    if !h.is_nondegenerate(opts.degeneracy_tol) {
        return Err(Error::DegenerateForm(h.det().abs()));
    }
    for (index, g) in gens.iter().enumerate() {
        // |det g| = 1 is established, so g and g/√det preserve the same forms
        let g1 = g.sqrt_det_rescale()?;
        let residual = h.preservation_residual(&g1);
        if !(residual < opts.preserve_tol) {
            return Err(Error::FormNotPreserved { index, residual });
        }
    }
    Ok(())
}

fn form_for_case(case: GroupCase, gens: &[Mat2], opts: &ClassifyOptions) -> Result<FormWitness> {
    let (model_form, n) = match case {
        GroupCase::Scalar => (HermitianForm::identity(), Mat2::identity()),
        GroupCase::AbelianReducible => abelian_model(gens, opts)?,
        GroupCase::NonabelianReducible => reducible_model(gens, opts)?,
        GroupCase::Irreducible => irreducible_model(gens, opts)?,
    };
    let back = form_action(&n.inverse()?, &model_form);
    Ok(FormWitness {
        form: back.normalized(),
        normalizer: n,
    })
}

/// Basis `[v, w]` with `(P − I)w = v`, so that `N⁻¹PN = [[1,1],[0,1]]` for a
/// parabolic `P` of trace 2.
fn jordan_basis(p: &Mat2) -> Result<Mat2> {
    let m = *p - Mat2::identity();
    let col1 = [m.a11, m.a21];
    let col2 = [m.a12, m.a22];
    let v = if vec_norm(&col1) >= vec_norm(&col2) { col1 } else { col2 };
    let nv = vec_norm(&v);
    if nv == 0.0 {
        return Err(Error::NotUnitary("identity has no Jordan basis".into()));
    }
    let v = [v[0] / nv, v[1] / nv];
    // minimal-norm solution of the rank-one system m·w = v: w = m†v / ‖m‖²
    let mv = m.adjoint().apply(v);
    let s = m.norm() * m.norm();
    let w = [mv[0] / s, mv[1] / s];
    Ok(Mat2::from_columns(v, w))
}

/// Eigenbasis of a diagonalizable matrix as columns.
fn eigenbasis(p: &Mat2, tol: f64) -> Result<Mat2> {
    let e = p.eigen_with_tol(tol);
    if e.defective {
        return Err(Error::NotUnitary("anchor is not diagonalizable".into()));
    }
    Ok(Mat2::from_columns(e.v1, e.v2))
}

fn sign_to_trace_two(p: &Mat2) -> Mat2 {
    if p.trace().re < 0.0 {
        -*p
    } else {
        *p
    }
}

fn abelian_model(gens: &[Mat2], opts: &ClassifyOptions) -> Result<(HermitianForm, Mat2)> {
    let anchor = gens
        .iter()
        .max_by(|a, b| a.traceless().norm().total_cmp(&b.traceless().norm()))
        .expect("nonempty");
    let e = anchor.eigen_with_tol(opts.eigen_tol);
    if e.defective {
        // parabolic: real upper-triangular with trace ±2 preserves H₀
        let n = jordan_basis(&sign_to_trace_two(anchor))?;
        return Ok((HermitianForm::standard(), n));
    }
    let n = Mat2::from_columns(e.v1, e.v2);
    let elliptic = (e.lambda1.norm() - 1.0).abs() <= 1e3 * opts.eigen_tol.max(1e-12);
    if elliptic {
        Ok((HermitianForm::identity(), n))
    } else {
        Ok((HermitianForm::standard(), n))
    }
}

fn reducible_model(gens: &[Mat2], opts: &ClassifyOptions) -> Result<(HermitianForm, Mat2)> {
    let v = common_eigenvector(gens, opts.eigen_tol)
        .ok_or_else(|| Error::NotUnitary("no common eigenvector".into()))?;
    let vp = [-v[1].conj(), v[0].conj()];
    let t = Mat2::from_columns(v, vp);
    let tri: Vec<Mat2> = gens
        .iter()
        .map(|g| g.conjugate_by(&t))
        .collect::<Result<_>>()?;
    // anchor: generator with the most separated diagonal a, 1/a
    let split = |m: &Mat2| (m.a11 - m.a22).norm();
    let anchor = tri
        .iter()
        .max_by(|a, b| split(a).total_cmp(&split(b)))
        .expect("nonempty");
    let da = anchor.a11 - anchor.a22;
    if da.norm() <= opts.eigen_tol {
        return Err(Error::NotUnitary("no diagonalizable anchor".into()));
    }
    // U = [[1,c],[0,d]] sends b ↦ c(a − 1/a) + b·d; c kills the anchor's b.
    let ratio = anchor.a12 / da;
    let residual = |m: &Mat2| m.a12 - ratio * (m.a11 - m.a22);
    let biggest = tri
        .iter()
        .map(residual)
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty");
    let d = if biggest.norm() > 0.0 {
        biggest.conj() / biggest.norm()
    } else {
        c64(1.0, 0.0)
    };
    let c = -ratio * d;
    let u = Mat2::new(c64(1.0, 0.0), c, c64(0.0, 0.0), d);
    Ok((HermitianForm::standard(), t * u))
}

/// Elements tried as the anchor `P`: generators and their pairwise products.
fn anchor_candidates(gens: &[Mat2]) -> Vec<Mat2> {
    let mut out: Vec<Mat2> = gens.to_vec();
    for (i, g) in gens.iter().enumerate() {
        for h in &gens[i + 1..] {
            out.push(*g * *h);
        }
    }
    out
}

fn irreducible_model(gens: &[Mat2], opts: &ClassifyOptions) -> Result<(HermitianForm, Mat2)> {
    let candidates = anchor_candidates(gens);
    let has_partner = |p: &Mat2| gens.iter().any(|q| !commutes(p, q, opts.commute_tol));
    let distance = |p: &Mat2| (p.trace().re.abs() - 2.0).abs();
    let anchor = candidates
        .iter()
        .filter(|p| !is_scalar_gen(p, opts.eigen_tol) && has_partner(p))
        .max_by(|a, b| distance(a).total_cmp(&distance(b)))
        .copied()
        .ok_or_else(|| Error::NotUnitary("no non-commuting pair".into()))?;

    let parabolic_tol = 1e3 * opts.eigen_tol.max(1e-12);
    let tr = anchor.trace().re.abs();
    if (tr - 2.0).abs() <= parabolic_tol {
        all_parabolic_model(&anchor, gens, opts)
    } else if tr > 2.0 {
        hyperbolic_model(&anchor, gens, opts)
    } else {
        elliptic_model(&anchor, gens, opts)
    }
}

/// Generator (conjugated into the basis `n`) that best separates from `p`.
fn best_partner(gens: &[Mat2], n: &Mat2) -> Result<Mat2> {
    let mut best: Option<(f64, Mat2)> = None;
    for g in gens {
        let q = g.conjugate_by(n)?;
        let score = q.a12.norm().min(q.a21.norm());
        if best.map_or(true, |(s, _)| score > s) {
            best = Some((score, q));
        }
    }
    Ok(best.expect("nonempty").1)
}

fn hyperbolic_model(p: &Mat2, gens: &[Mat2], opts: &ClassifyOptions) -> Result<(HermitianForm, Mat2)> {
    let t = eigenbasis(p, opts.eigen_tol)?;
    // largest off-diagonal entry over all generators fixes the real structure
    let mut pick = c64(0.0, 0.0);
    let mut upper = true;
    for g in gens {
        let q = g.conjugate_by(&t)?;
        if q.a12.norm() > pick.norm() {
            pick = q.a12;
            upper = true;
        }
        if q.a21.norm() > pick.norm() {
            pick = q.a21;
            upper = false;
        }
    }
    if pick.norm() == 0.0 {
        return Err(Error::NotUnitary("generators are simultaneously diagonal".into()));
    }
    // diag(1,d) maps q12 ↦ q12·d and q21 ↦ q21/d
    let d = if upper {
        pick.conj() / pick.norm()
    } else {
        pick / pick.norm()
    };
    let n = t * Mat2::diag(c64(1.0, 0.0), d);
    Ok((HermitianForm::standard(), n))
}

fn elliptic_model(p: &Mat2, gens: &[Mat2], opts: &ClassifyOptions) -> Result<(HermitianForm, Mat2)> {
    let t = eigenbasis(p, opts.eigen_tol)?;
    let q = best_partner(gens, &t)?;
    if q.a21.norm() == 0.0 {
        return Err(Error::NotUnitary("partner is triangular in the anchor eigenbasis".into()));
    }
    let h22 = (-q.a12 / q.a21.conj()).re;
    Ok((HermitianForm::diag(1.0, h22), t))
}

fn all_parabolic_model(p: &Mat2, gens: &[Mat2], opts: &ClassifyOptions) -> Result<(HermitianForm, Mat2)> {
    let p = sign_to_trace_two(p);
    let n = jordan_basis(&p)?;
    let mut best: Option<Mat2> = None;
    for g in gens {
        let q = sign_to_trace_two(&g.conjugate_by(&n)?);
        if best.map_or(true, |b| q.a21.norm() > b.a21.norm()) {
            best = Some(q);
        }
    }
    let q = best.expect("nonempty");
    if q.a21.norm() <= opts.eigen_tol {
        return Err(Error::NotUnitary("partner commutes with the parabolic anchor".into()));
    }
    // [[0, i], [−i, c]] is fixed by the Jordan block; c makes Q†HQ agree at (1,1)
    let c = 2.0 * (q.a11.conj() * q.a21).im / q.a21.norm_sqr();
    Ok((HermitianForm::new(0.0, c64(0.0, 1.0), c), n))
}

/// Beukers' inequality `(t_PQ² − 4)(t_QR² − 4) ≥ 16` for real traces.
pub fn beukers_inequality(t_pq: C64, t_qr: C64) -> bool {
    beukers_inequality_with(t_pq, t_qr, 1e-8, 1e-6)
}

/// Traces count as real when `|Im| ≤ imag_tol·max(1,|t|)`; the product is
/// compared against `16 − slack`.
pub fn beukers_inequality_with(t_pq: C64, t_qr: C64, imag_tol: f64, slack: f64) -> bool {
    if !is_real(t_pq, imag_tol) || !is_real(t_qr, imag_tol) {
        return false;
    }
    beukers_product(t_pq, t_qr) >= 16.0 - slack
}

/// `(Re t_PQ² − 4)(Re t_QR² − 4)`.
pub fn beukers_product(t_pq: C64, t_qr: C64) -> f64 {
    (t_pq.re * t_pq.re - 4.0) * (t_qr.re * t_qr.re - 4.0)
}

/// True when `α` lies within `1e-9` (mod 1) of one of
/// `0, γ, δ, ε, γ+δ, γ+ε, δ+ε, γ+δ+ε`, i.e. when the Heun monodromy may be
/// reducible.
pub fn heun_reducibility_guard(p: &HeunParams) -> bool {
    let (g, d, e) = (p.gamma, p.delta, p.epsilon);
    let zero = c64(0.0, 0.0);
    [zero, g, d, e, g + d, g + e, d + e, g + d + e]
        .iter()
        .any(|s| dist_to_integer(p.alpha - *s) <= 1e-9)
}

fn dist_to_integer(z: C64) -> f64 {
    (z - c64(z.re.round(), 0.0)).norm()
}
