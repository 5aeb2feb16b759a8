//! Symbols of shift operators on circle unions and their lift to the
//! group-algebra-twisted fiber.
//!
//! A symbol assigns to each group element a matrix trigonometric polynomial
//! per copy, with independent branches on the two covector directions. The
//! lifted symbol acts on `C^k (x) C[Gamma]`; restricting it to the isotropy
//! invariants is what the Fredholm test inspects.

use std::collections::BTreeMap;

use ndarray::Array2;
use ndarray_linalg::Eigh;

use crate::error::{Error, Result};
use crate::geometry::{cotangent_action, CotangentPoint, IsometricAction};
use crate::group::{FiniteGroup, Side, Subgroup, UnitaryRep};
use crate::linalg::{adjoint, czero, identity, kron, matmul, max_abs_diff, CMat, C64};

/// Trigonometric polynomial `sum_m c_m e^{i m theta}`, coefficients stored
/// with odd length centered at degree zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    coeffs: Vec<C64>,
}

impl TrigPoly {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() % 2 != 1 {
            return Err(Error::Parse(format!(
                "coefficient list must have odd length (center = degree 0), got {}",
                coeffs.len()
            )));
        }
        Ok(TrigPoly { coeffs })
    }

    pub fn zero() -> Self {
        TrigPoly { coeffs: vec![czero()] }
    }

    pub fn constant(c: C64) -> Self {
        TrigPoly { coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coeff(&self, m: i64) -> C64 {
        let d = self.degree() as i64;
        if m.abs() > d {
            czero()
        } else {
            self.coeffs[(m + d) as usize]
        }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let d = self.degree().max(other.degree()) as i64;
        let coeffs = (-d..=d).map(|m| self.coeff(m) + other.coeff(m)).collect();
        TrigPoly { coeffs }
    }

    pub fn eval(&self, theta: f64) -> C64 {
        let d = self.degree() as i64;
        let mut acc = czero();
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let m = idx as i64 - d;
            acc += c * C64::from_polar(1.0, m as f64 * theta);
        }
        acc
    }
}

/// `k x k` matrix of trigonometric polynomials.
pub type TrigMatrix = Vec<Vec<TrigPoly>>;

fn trig_matrix_eval(m: &TrigMatrix, theta: f64) -> CMat {
    let k = m.len();
    Array2::from_shape_fn((k, k), |(i, j)| m[i][j].eval(theta))
}

fn trig_matrix_degree(m: &TrigMatrix) -> usize {
    m.iter().flatten().map(|p| p.degree()).max().unwrap_or(0)
}

/// Independent symbol branches over the two covector directions of a circle.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchPair {
    pub plus: TrigMatrix,
    pub minus: TrigMatrix,
}

impl BranchPair {
    pub fn constant_scalar(c: C64) -> Self {
        let m = vec![vec![TrigPoly::constant(c)]];
        BranchPair { plus: m.clone(), minus: m }
    }
}

/// Principal symbol of one coefficient operator: a branch pair per copy.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigMatrixSymbol {
    pub rank: usize,
    pub copies: Vec<BranchPair>,
}

impl TrigMatrixSymbol {
    pub fn new(rank: usize, copies: Vec<BranchPair>) -> Result<Self> {
        for (c, bp) in copies.iter().enumerate() {
            for m in [&bp.plus, &bp.minus] {
                if m.len() != rank || m.iter().any(|row| row.len() != rank) {
                    return Err(Error::Validation {
                        path: format!("symbols[copy {c}]"),
                        message: format!("matrix must be {rank} x {rank}"),
                    });
                }
            }
        }
        Ok(TrigMatrixSymbol { rank, copies })
    }

    pub fn constant_scalar(copies: usize, c: C64) -> Self {
        TrigMatrixSymbol {
            rank: 1,
            copies: vec![BranchPair::constant_scalar(c); copies],
        }
    }

    pub fn add(&self, other: &TrigMatrixSymbol) -> TrigMatrixSymbol {
        assert_eq!(self.rank, other.rank);
        assert_eq!(self.copies.len(), other.copies.len());
        let add_m = |a: &TrigMatrix, b: &TrigMatrix| -> TrigMatrix {
            a.iter()
                .zip(b)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y)).collect())
                .collect()
        };
        TrigMatrixSymbol {
            rank: self.rank,
            copies: self
                .copies
                .iter()
                .zip(&other.copies)
                .map(|(x, y)| BranchPair {
                    plus: add_m(&x.plus, &y.plus),
                    minus: add_m(&x.minus, &y.minus),
                })
                .collect(),
        }
    }

    pub fn eval(&self, pt: CotangentPoint) -> CMat {
        let bp = &self.copies[pt.copy];
        let branch = if pt.xi > 0 { &bp.plus } else { &bp.minus };
        trig_matrix_eval(branch, pt.theta)
    }

    pub fn max_degree(&self) -> usize {
        self.copies
            .iter()
            .flat_map(|bp| [trig_matrix_degree(&bp.plus), trig_matrix_degree(&bp.minus)])
            .max()
            .unwrap_or(0)
    }
}

/// The full operator datum: an action plus a symbol per group element.
/// Absent elements have zero coefficient.
#[derive(Clone, Debug)]
pub struct GammaSymbolData {
    pub action: IsometricAction,
    pub symbols: BTreeMap<usize, TrigMatrixSymbol>,
}

impl GammaSymbolData {
    pub fn new(action: IsometricAction, symbols: BTreeMap<usize, TrigMatrixSymbol>) -> Result<Self> {
        let k = action.fiber_rank();
        let copies = action.manifold.copies;
        for (&g, s) in &symbols {
            if g >= action.group.order() {
                return Err(Error::Validation {
                    path: format!("symbols[{g}]"),
                    message: "not a group element index".into(),
                });
            }
            if s.rank != k {
                return Err(Error::Validation {
                    path: format!("symbols[{g}]"),
                    message: format!("rank {} does not match fiber rank {k}", s.rank),
                });
            }
            if s.copies.len() != copies {
                return Err(Error::Validation {
                    path: format!("symbols[{g}]"),
                    message: format!("{} copies given, manifold has {copies}", s.copies.len()),
                });
            }
        }
        Ok(GammaSymbolData { action, symbols })
    }

    pub fn fiber_rank(&self) -> usize {
        self.action.fiber_rank()
    }

    pub fn eval_symbol(&self, gamma: usize, pt: CotangentPoint) -> CMat {
        match self.symbols.get(&gamma) {
            Some(s) => s.eval(pt),
            None => Array2::from_elem((self.fiber_rank(), self.fiber_rank()), czero()),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.symbols.values().map(|s| s.max_degree()).max().unwrap_or(0)
    }
}

/// Pullback convention used when lifting symbols; `Transposed` is a
/// deliberately wrong variant kept as a negative control.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PullbackConvention {
    Inverse,
    Transposed,
}

/// Lifted symbol on `C^k (x) C[Gamma]` at the covector `pt`.
///
/// Block `(r, c)` equals `U(r) a_{r^{-1} c}((r^{-1}).pt) U(r)^H`, with group
/// slots outermost in the flat index.
pub fn uniformized_symbol_with_convention(
    data: &GammaSymbolData,
    pt: CotangentPoint,
    convention: PullbackConvention,
) -> CMat {
    let group = &data.action.group;
    let n = group.order();
    let k = data.fiber_rank();
    let mut out = Array2::from_elem((n * k, n * k), czero());
    for r in group.elements() {
        let pull = match convention {
            PullbackConvention::Inverse => cotangent_action(&data.action, group.inv(r), pt),
            PullbackConvention::Transposed => cotangent_action(&data.action, r, pt),
        };
        let u = data.action.fiber_rep.matrix(r);
        let uh = adjoint(u);
        for c in group.elements() {
            let gamma = group.mul(group.inv(r), c);
            if !data.symbols.contains_key(&gamma) {
                continue;
            }
            let block = matmul(&matmul(u, &data.eval_symbol(gamma, pull)), &uh);
            for i in 0..k {
                for j in 0..k {
                    out[(r * k + i, c * k + j)] = block[(i, j)];
                }
            }
        }
    }
    out
}

pub fn uniformized_symbol(data: &GammaSymbolData, pt: CotangentPoint) -> CMat {
    uniformized_symbol_with_convention(data, pt, PullbackConvention::Inverse)
}

/// Fiber action `rho(h) = L_h (x) U(h)` on `C^k (x) C[Gamma]` (group slot
/// outermost), without checking that `h` fixes any covector.
pub fn tl_rep_matrix(group: &FiniteGroup, rep: &UnitaryRep, h: usize) -> CMat {
    let left = UnitaryRep::regular(group, Side::Left);
    kron(left.matrix(h), rep.matrix(h))
}

/// Fiber action of `h` at a covector it must fix.
pub fn tl_rep_fiber(action: &IsometricAction, h: usize, pt: CotangentPoint) -> Result<CMat> {
    if !crate::geometry::covector_fixed_by(action, h, pt) {
        return Err(Error::NotFixed { element: h });
    }
    Ok(tl_rep_matrix(&action.group, &action.fiber_rep, h))
}

/// Fiberwise flip `v (x) delta_mu -> U(mu^{-1}) v (x) delta_{mu^{-1}}`;
/// an involution intertwining right translations with `rho`.
pub fn q_fiber_matrix(group: &FiniteGroup, rep: &UnitaryRep) -> CMat {
    let n = group.order();
    let k = rep.dim();
    let mut out = Array2::from_elem((n * k, n * k), czero());
    for mu in group.elements() {
        let mi = group.inv(mu);
        let u = rep.matrix(mi);
        for i in 0..k {
            for j in 0..k {
                out[(mi * k + i, mu * k + j)] = u[(i, j)];
            }
        }
    }
    out
}

/// `1 (x) R_gamma` on `C^k (x) C[Gamma]` (group slot outermost).
pub fn r_fiber_matrix(group: &FiniteGroup, k: usize, gamma: usize) -> CMat {
    let right = UnitaryRep::regular(group, Side::Right);
    kron(right.matrix(gamma), &identity(k))
}

/// Orthogonal projector onto the `rho`-invariants of the isotropy subgroup,
/// plus an orthonormal basis of its range as columns.
pub fn invariant_projector(action: &IsometricAction, gamma0: &Subgroup) -> (CMat, CMat) {
    let group = &action.group;
    let k = action.fiber_rank();
    let dim = group.order() * k;
    let mut proj = Array2::from_elem((dim, dim), czero());
    for &h in gamma0.members() {
        proj = proj + tl_rep_matrix(group, &action.fiber_rep, h);
    }
    proj.mapv_inplace(|z| z / C64::new(gamma0.len() as f64, 0.0));
    let (vals, vecs) = proj.eigh(ndarray_linalg::UPLO::Lower).expect("projector eigh");
    let keep: Vec<usize> = vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(i, _)| i)
        .collect();
    let mut basis = Array2::from_elem((dim, keep.len()), czero());
    for (bcol, &col) in keep.iter().enumerate() {
        for row in 0..dim {
            basis[(row, bcol)] = vecs[(row, col)];
        }
    }
    (proj, basis)
}

pub const EQUIVARIANCE_TOL: f64 = 1e-8;

/// Compress a lifted symbol to the invariant subspace spanned by `basis`,
/// after checking it commutes with the isotropy fiber action.
pub fn restricted_symbol(
    sigma: &CMat,
    basis: &CMat,
    isotropy_mats: &[CMat],
) -> Result<CMat> {
    let mut defect = 0.0f64;
    for rho in isotropy_mats {
        defect = defect.max(max_abs_diff(&matmul(sigma, rho), &matmul(rho, sigma)));
    }
    if defect > EQUIVARIANCE_TOL {
        return Err(Error::NotEquivariant { defect });
    }
    Ok(matmul(&matmul(&adjoint(basis), sigma), basis))
}

/// `max |sigma(gamma.pt) - rho(gamma) sigma(pt) rho(gamma)^{-1}|` for the
/// lifted symbol; zero up to rounding for a correctly lifted symbol.
pub fn equivariance_defect(data: &GammaSymbolData, gamma: usize, pt: CotangentPoint) -> f64 {
    let group = &data.action.group;
    let moved = uniformized_symbol(data, cotangent_action(&data.action, gamma, pt));
    let rho = tl_rep_matrix(group, &data.action.fiber_rep, gamma);
    let rho_inv = tl_rep_matrix(group, &data.action.fiber_rep, group.inv(gamma));
    let conj = matmul(&matmul(&rho, &uniformized_symbol(data, pt)), &rho_inv);
    max_abs_diff(&moved, &conj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_action, IsometryDescriptor, ModelManifold};
    use crate::group::FiniteGroup;
    use crate::linalg::{cone, max_abs, min_singular};
    use ndarray::array;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn z2_antipodal_data(a_e: f64, a_g: f64) -> GammaSymbolData {
        let g = FiniteGroup::cyclic(2);
        let rep = UnitaryRep::trivial(&g, 1);
        let d = IsometryDescriptor {
            copy_perm: vec![0],
            per_copy: vec![crate::geometry::CopyMap {
                angle: crate::angle::Turn::half(),
                orientation: 1,
            }],
        };
        let action = build_action(g, ModelManifold::circles(1), &[(1, d)], rep).unwrap();
        let mut symbols = BTreeMap::new();
        symbols.insert(0, TrigMatrixSymbol::constant_scalar(1, c(a_e)));
        symbols.insert(1, TrigMatrixSymbol::constant_scalar(1, c(a_g)));
        GammaSymbolData::new(action, symbols).unwrap()
    }

    #[test]
    fn trivial_group_lift_is_the_symbol_itself() {
        let g = FiniteGroup::cyclic(1);
        let rep = UnitaryRep::trivial(&g, 1);
        let action = build_action(
            g,
            ModelManifold::circles(1),
            &[],
            rep,
        )
        .unwrap();
        let mut symbols = BTreeMap::new();
        let p = TrigPoly::new(vec![czero(), c(2.0), cone()]).unwrap(); // 2 + e^{i theta}
        let bp = BranchPair { plus: vec![vec![p.clone()]], minus: vec![vec![p]] };
        symbols.insert(0, TrigMatrixSymbol::new(1, vec![bp]).unwrap());
        let data = GammaSymbolData::new(action, symbols).unwrap();
        let pt = CotangentPoint::new(0, 0.3, 1);
        let sigma = uniformized_symbol(&data, pt);
        assert_eq!(sigma.dim(), (1, 1));
        let expected = data.eval_symbol(0, pt);
        assert!(max_abs_diff(&sigma, &expected) < 1e-14);
    }

    #[test]
    fn antipodal_constants_lift_to_circulant() {
        let data = z2_antipodal_data(2.0, 1.0);
        let pt = CotangentPoint::new(0, 1.234, 1);
        let sigma = uniformized_symbol(&data, pt);
        let expected = array![[c(2.0), c(1.0)], [c(1.0), c(2.0)]];
        assert!(max_abs_diff(&sigma, &expected) < 1e-14);
        assert!((min_singular(&sigma) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q_is_an_involution_and_intertwines() {
        for group in [
            FiniteGroup::cyclic(4),
            FiniteGroup::dihedral(3),
            FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        ] {
            let rep = UnitaryRep::regular(&group, Side::Left); // a faithful unitary rep
            let q = q_fiber_matrix(&group, &rep);
            let k = rep.dim();
            assert!(max_abs_diff(&matmul(&q, &q), &identity(group.order() * k)) < 1e-14);
            for gamma in group.elements() {
                let lhs = matmul(&q, &r_fiber_matrix(&group, k, gamma));
                let rhs = matmul(&tl_rep_matrix(&group, &rep, gamma), &q);
                assert!(
                    max_abs_diff(&lhs, &rhs) < 1e-14,
                    "intertwining fails for {gamma} in group of order {}",
                    group.order()
                );
            }
        }
    }

    #[test]
    fn klein_restriction_of_identity_pair() {
        // Klein four-group, a antipodal, b trivial; a_e = a_b = 1.
        let g = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let rep = UnitaryRep::trivial(&g, 1);
        let a = IsometryDescriptor {
            copy_perm: vec![0],
            per_copy: vec![crate::geometry::CopyMap {
                angle: crate::angle::Turn::half(),
                orientation: 1,
            }],
        };
        let b = IsometryDescriptor::identity(1);
        let action = build_action(g, ModelManifold::circles(1), &[(2, a), (1, b)], rep).unwrap();
        let mut symbols = BTreeMap::new();
        symbols.insert(0, TrigMatrixSymbol::constant_scalar(1, cone()));
        symbols.insert(1, TrigMatrixSymbol::constant_scalar(1, cone()));
        let data = GammaSymbolData::new(action.clone(), symbols).unwrap();

        let pt = CotangentPoint::new(0, 0.77, -1);
        let sigma = uniformized_symbol(&data, pt);
        // full lifted symbol is singular...
        assert!(min_singular(&sigma) < 1e-12);

        // ...but its compression to the {e, b}-invariants is 2 * identity.
        let gamma0 = minimal_iso(&action);
        let (proj, basis) = invariant_projector(&action, &gamma0);
        assert_eq!(basis.dim().1, 2);
        assert!(max_abs_diff(&matmul(&proj, &proj), &proj) < 1e-13);
        let mats: Vec<CMat> = gamma0
            .members()
            .iter()
            .map(|&h| tl_rep_matrix(&action.group, &action.fiber_rep, h))
            .collect();
        let restricted = restricted_symbol(&sigma, &basis, &mats).unwrap();
        assert!(max_abs_diff(&restricted, &(identity(2) * c(2.0))) < 1e-12);
        assert!((min_singular(&restricted) - 2.0).abs() < 1e-12);
    }

    fn minimal_iso(action: &IsometricAction) -> Subgroup {
        let comps = crate::geometry::quotient_components(action);
        crate::geometry::minimal_isotropy(action, &comps[0]).unwrap().gamma0
    }

    #[test]
    fn lifted_symbol_is_equivariant() {
        let g = FiniteGroup::cyclic(2);
        let rep = UnitaryRep::trivial(&g, 1);
        let d = IsometryDescriptor {
            copy_perm: vec![0],
            per_copy: vec![crate::geometry::CopyMap {
                angle: crate::angle::Turn::half(),
                orientation: 1,
            }],
        };
        let action = build_action(g, ModelManifold::circles(1), &[(1, d)], rep).unwrap();
        let mut symbols = BTreeMap::new();
        let p = TrigPoly::new(vec![c(0.3), c(2.0), cone()]).unwrap();
        let q_poly = TrigPoly::new(vec![czero(), c(0.5), c(-0.25)]).unwrap();
        symbols.insert(
            0,
            TrigMatrixSymbol::new(
                1,
                vec![BranchPair { plus: vec![vec![p.clone()]], minus: vec![vec![q_poly.clone()]] }],
            )
            .unwrap(),
        );
        symbols.insert(
            1,
            TrigMatrixSymbol::new(
                1,
                vec![BranchPair { plus: vec![vec![q_poly]], minus: vec![vec![p]] }],
            )
            .unwrap(),
        );
        let data = GammaSymbolData::new(action, symbols).unwrap();
        for (theta, xi) in [(0.0, 1), (0.9, -1), (2.5, 1), (5.0, -1)] {
            let pt = CotangentPoint::new(0, theta, xi);
            for gamma in 0..2 {
                assert!(equivariance_defect(&data, gamma, pt) < 1e-13);
            }
        }
    }

    #[test]
    fn lift_is_linear_in_the_symbols() {
        let d1 = z2_antipodal_data(2.0, 1.0);
        let d2 = z2_antipodal_data(0.5, -3.0);
        let sum = z2_antipodal_data(2.5, -2.0);
        let pt = CotangentPoint::new(0, 0.1, 1);
        let lhs = uniformized_symbol(&d1, pt) + uniformized_symbol(&d2, pt);
        assert!(max_abs_diff(&lhs, &uniformized_symbol(&sum, pt)) < 1e-14);
        assert!(max_abs(&lhs) > 0.0);
    }
}
