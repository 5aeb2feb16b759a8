//! Fredholm verdicts for shift operators on circle unions.
//!
//! Per quotient component the analyzer computes the minimal isotropy group,
//! samples the fixed covector sphere, lifts the symbol, compresses it to the
//! isotropy invariants and tests invertibility; the overall verdict is the
//! conjunction over components. Full-symbol invertibility is tracked
//! separately, so operators that are Fredholm without being elliptic are
//! classified as such.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{
    build_action, minimal_isotropy, quotient_components, sample_fixed_sphere, CotangentPoint,
    IsometryDescriptor, ModelManifold,
};
use crate::group::{FiniteGroup, Subgroup, UnitaryRep};
use crate::linalg::{max_abs_diff, min_singular, CMat};
use crate::symbol::{
    invariant_projector, restricted_symbol, tl_rep_matrix, uniformized_symbol, BranchPair,
    GammaSymbolData, TrigMatrixSymbol, TrigPoly,
};

pub const EPS_INVERTIBLE: f64 = 1e-8;
pub const MARGINAL_BAND_TOP: f64 = 1e-6;
pub const REFINE_FACTOR: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Elliptic,
    FredholmNonElliptic,
    NotFredholm,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Elliptic => "elliptic",
            Classification::FredholmNonElliptic => "fredholm_non_elliptic",
            Classification::NotFredholm => "not_fredholm",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Witness {
    pub point: CotangentPoint,
    pub sigma_min: f64,
}

#[derive(Clone, Debug)]
pub struct ComponentRecord {
    pub copies: Vec<usize>,
    pub gamma0: Vec<usize>,
    pub restricted_dim: usize,
    pub min_restricted_sv: f64,
    pub fredholm: bool,
    /// Sample point achieving the minimum.
    pub witness: Option<Witness>,
    pub samples_used: usize,
    pub refined: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct FredholmVerdict {
    pub components: Vec<ComponentRecord>,
    pub fredholm: bool,
    pub elliptic: bool,
    pub min_full_sv: f64,
    pub classification: Classification,
}

#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    pub samples: usize,
    pub seed: u64,
    pub eps_inv: f64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { samples: 256, seed: 0, eps_inv: EPS_INVERTIBLE }
    }
}

fn effective_samples(data: &GammaSymbolData, requested: usize) -> usize {
    requested.max(8 * (data.max_degree() + 1))
}

/// Minimum of `min_singular` of the restricted lifted symbol over the given
/// sample points, with the witness.
fn restricted_minimum(
    data: &GammaSymbolData,
    basis: &CMat,
    isotropy_mats: &[CMat],
    points: &[CotangentPoint],
) -> Result<(f64, Option<Witness>)> {
    let mut best = f64::INFINITY;
    let mut witness = None;
    for &pt in points {
        let sigma = uniformized_symbol(data, pt);
        let restricted = restricted_symbol(&sigma, basis, isotropy_mats)?;
        let m = min_singular(&restricted);
        if m < best {
            best = m;
            witness = Some(Witness { point: pt, sigma_min: m });
        }
    }
    Ok((best, witness))
}

fn analyze_component(
    data: &GammaSymbolData,
    component: &[usize],
    opts: &AnalyzeOptions,
) -> Result<ComponentRecord> {
    let action = &data.action;
    let report = minimal_isotropy(action, component)?;
    let gamma0 = &report.gamma0;
    let (_, basis) = invariant_projector(action, gamma0);
    let isotropy_mats: Vec<CMat> = gamma0
        .members()
        .iter()
        .map(|&h| tl_rep_matrix(&action.group, &action.fiber_rep, h))
        .collect();

    let mut samples = effective_samples(data, opts.samples);
    let points = sample_fixed_sphere(action, component, gamma0, samples, opts.seed)?;
    let (mut best, mut witness) = restricted_minimum(data, &basis, &isotropy_mats, &points)?;

    let mut refined = false;
    if best > opts.eps_inv && best <= MARGINAL_BAND_TOP {
        // marginal: resample denser before trusting the sign of the margin
        refined = true;
        samples *= REFINE_FACTOR;
        let points = sample_fixed_sphere(action, component, gamma0, samples, opts.seed)?;
        let (b, w) = restricted_minimum(data, &basis, &isotropy_mats, &points)?;
        best = b;
        witness = w;
    }

    let is_zero = data.symbols.is_empty()
        || points.iter().all(|&pt| crate::linalg::max_abs(&uniformized_symbol(data, pt)) < 1e-14);
    let note = if is_zero { Some("operator vanishes on this component".into()) } else { None };

    Ok(ComponentRecord {
        copies: component.to_vec(),
        gamma0: gamma0.members().to_vec(),
        restricted_dim: basis.dim().1,
        min_restricted_sv: best,
        fredholm: best > opts.eps_inv,
        witness,
        samples_used: samples,
        refined,
        note,
    })
}

/// Minimum of the full (unrestricted) lifted symbol over the whole covector
/// sphere; positivity is the classical ellipticity test.
pub fn ellipticity_minimum(data: &GammaSymbolData, opts: &AnalyzeOptions) -> Result<f64> {
    let action = &data.action;
    let trivial = action.group.trivial_subgroup();
    let samples = effective_samples(data, opts.samples);
    let mut best = f64::INFINITY;
    for c in 0..action.manifold.copies {
        let points = sample_fixed_sphere(action, &[c], &trivial, samples, opts.seed)?;
        for pt in points {
            best = best.min(min_singular(&uniformized_symbol(data, pt)));
        }
    }
    Ok(best)
}

/// Full Fredholm analysis: per-component invariant-symbol invertibility plus
/// the global ellipticity check.
pub fn analyze(data: &GammaSymbolData, opts: &AnalyzeOptions) -> Result<FredholmVerdict> {
    let components = quotient_components(&data.action);
    let mut records = Vec::new();
    for comp in &components {
        records.push(analyze_component(data, comp, opts)?);
    }
    let fredholm = records.iter().all(|r| r.fredholm);
    let min_full_sv = ellipticity_minimum(data, opts)?;
    let elliptic = min_full_sv > opts.eps_inv;
    let classification = if fredholm {
        if elliptic {
            Classification::Elliptic
        } else {
            Classification::FredholmNonElliptic
        }
    } else {
        Classification::NotFredholm
    };
    Ok(FredholmVerdict { components: records, fredholm, elliptic, min_full_sv, classification })
}

/// Shortcut valid only for actions that are trivial both on the base and the
/// fiber: the operator is multiplication by `sum_gamma a_gamma`, so the test
/// is pointwise invertibility of that sum. Uses the same sampler as
/// `analyze` so that both paths see the same covectors.
pub fn trivial_action_reduce(data: &GammaSymbolData, opts: &AnalyzeOptions) -> Result<FredholmVerdict> {
    let action = &data.action;
    if !action.is_geometrically_trivial() || !action.fiber_rep.is_trivial() {
        return Err(Error::NotTrivialAction);
    }
    let whole = action.group.whole_subgroup();
    let samples = effective_samples(data, opts.samples);
    let mut records = Vec::new();
    for c in 0..action.manifold.copies {
        let points = sample_fixed_sphere(action, &[c], &whole, samples, opts.seed)?;
        let mut best = f64::INFINITY;
        let mut witness = None;
        for &pt in &points {
            let mut sum = crate::linalg::identity(data.fiber_rank());
            sum.mapv_inplace(|_| crate::linalg::czero());
            for &gamma in data.symbols.keys() {
                sum = sum + data.eval_symbol(gamma, pt);
            }
            let m = min_singular(&sum);
            if m < best {
                best = m;
                witness = Some(Witness { point: pt, sigma_min: m });
            }
        }
        records.push(ComponentRecord {
            copies: vec![c],
            gamma0: whole.members().to_vec(),
            restricted_dim: data.fiber_rank(),
            min_restricted_sv: best,
            fredholm: best > opts.eps_inv,
            witness,
            samples_used: samples,
            refined: false,
            note: None,
        });
    }
    let fredholm = records.iter().all(|r| r.fredholm);
    let min_full_sv = records_min(&records);
    let classification =
        if fredholm { Classification::Elliptic } else { Classification::NotFredholm };
    Ok(FredholmVerdict {
        components: records,
        fredholm,
        elliptic: fredholm,
        min_full_sv,
        classification,
    })
}

fn records_min(records: &[ComponentRecord]) -> f64 {
    records.iter().map(|r| r.min_restricted_sv).fold(f64::INFINITY, f64::min)
}

/// Rewrite the operator over the quotient group `Gamma / H` for a normal
/// subgroup `H` acting trivially on base and fiber: coefficients are summed
/// over cosets. The operator itself is unchanged.
pub fn quotient_rewrite(data: &GammaSymbolData, h: &Subgroup) -> Result<GammaSymbolData> {
    let action = &data.action;
    let group = &action.group;
    if !h.is_normal(group) {
        return Err(Error::NotNormal);
    }
    for &x in h.members() {
        let trivially = (0..action.manifold.copies).all(|c| action.acts_trivially_on_copy(x, c));
        if !trivially
            || max_abs_diff(action.fiber_rep.matrix(x), &crate::linalg::identity(action.fiber_rank()))
                > 1e-12
        {
            return Err(Error::NotTriviallyActing);
        }
    }
    let cosets = h.left_cosets(group);
    let coset_of = |g: usize| cosets.iter().position(|c| c.contains(&g)).unwrap();
    let q = cosets.len();
    // quotient multiplication through coset representatives
    let mut table = vec![vec![0usize; q]; q];
    for a in 0..q {
        for b in 0..q {
            table[a][b] = coset_of(group.mul(cosets[a][0], cosets[b][0]));
        }
    }
    let qgroup = FiniteGroup::from_table(table)?;
    let generators: Vec<(usize, IsometryDescriptor)> =
        (0..q).map(|a| (a, data.action.map(cosets[a][0]).clone())).collect();
    let rep_mats: Vec<(usize, CMat)> =
        (0..q).map(|a| (a, action.fiber_rep.matrix(cosets[a][0]).clone())).collect();
    let qrep = UnitaryRep::from_generators(&qgroup, &rep_mats)?;
    let qaction = build_action(qgroup, action.manifold, &generators, qrep)?;
    let mut symbols: BTreeMap<usize, TrigMatrixSymbol> = BTreeMap::new();
    for (&gamma, sym) in &data.symbols {
        let a = coset_of(gamma);
        symbols
            .entry(a)
            .and_modify(|s| *s = s.add(sym))
            .or_insert_with(|| sym.clone());
    }
    GammaSymbolData::new(qaction, symbols)
}

/// Rewrite an operator whose action only permutes copies (transitively, with
/// no rotation or reflection and a trivial fiber twist) as a single matrix
/// symbol over one circle with the trivial group. The copies become fiber
/// slots; singular values are preserved exactly.
pub fn homogeneous_rewrite(data: &GammaSymbolData) -> Result<GammaSymbolData> {
    let action = &data.action;
    let group = &action.group;
    let copies = action.manifold.copies;
    for g in group.elements() {
        if action.map(g).per_copy.iter().any(|m| !m.is_identity()) {
            return Err(Error::NotCosetAction("action rotates or reflects a copy".into()));
        }
    }
    if !action.fiber_rep.is_trivial() {
        return Err(Error::NotCosetAction("fiber representation is not trivial".into()));
    }
    let comps = quotient_components(action);
    if comps.len() != 1 {
        return Err(Error::NotCosetAction("copy permutation action is not transitive".into()));
    }
    let k = data.fiber_rank();
    let rank = copies * k;
    let zero_block: Vec<Vec<TrigPoly>> = vec![vec![TrigPoly::zero(); rank]; rank];
    let mut plus = zero_block.clone();
    let mut minus = zero_block;
    for (&gamma, sym) in &data.symbols {
        let perm = &action.map(gamma).copy_perm;
        for j in 0..copies {
            let i = perm[j]; // gamma sends copy j to copy i
            for p in 0..k {
                for qn in 0..k {
                    let bp = &sym.copies[i];
                    plus[i * k + p][j * k + qn] =
                        plus[i * k + p][j * k + qn].add(&bp.plus[p][qn]);
                    minus[i * k + p][j * k + qn] =
                        minus[i * k + p][j * k + qn].add(&bp.minus[p][qn]);
                }
            }
        }
    }
    let trivial_group = FiniteGroup::cyclic(1);
    let rep = UnitaryRep::trivial(&trivial_group, rank);
    let new_action = build_action(trivial_group, ModelManifold::circles(1), &[], rep)?;
    let mut symbols = BTreeMap::new();
    symbols.insert(0, TrigMatrixSymbol::new(rank, vec![BranchPair { plus, minus }])?);
    GammaSymbolData::new(new_action, symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Turn;
    use crate::geometry::CopyMap;
    use crate::linalg::C64;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn constant_data(
        group: FiniteGroup,
        gens: &[(usize, IsometryDescriptor)],
        copies: usize,
        coeffs: &[(usize, f64)],
    ) -> GammaSymbolData {
        let rep = UnitaryRep::trivial(&group, 1);
        let action = build_action(group, ModelManifold::circles(copies), gens, rep).unwrap();
        let mut symbols = BTreeMap::new();
        for &(g, v) in coeffs {
            symbols.insert(g, TrigMatrixSymbol::constant_scalar(copies, c(v)));
        }
        GammaSymbolData::new(action, symbols).unwrap()
    }

    fn antipodal_gen() -> IsometryDescriptor {
        IsometryDescriptor {
            copy_perm: vec![0],
            per_copy: vec![CopyMap { angle: Turn::half(), orientation: 1 }],
        }
    }

    #[test]
    fn antipodal_elliptic_verdict() {
        let data = constant_data(FiniteGroup::cyclic(2), &[(1, antipodal_gen())], 1, &[(0, 2.0), (1, 1.0)]);
        let v = analyze(&data, &AnalyzeOptions { samples: 16, ..Default::default() }).unwrap();
        assert!(v.fredholm);
        assert_eq!(v.classification, Classification::Elliptic);
        assert!((v.components[0].min_restricted_sv - 1.0).abs() < 1e-10);
    }

    #[test]
    fn antipodal_degenerate_verdict() {
        let data = constant_data(FiniteGroup::cyclic(2), &[(1, antipodal_gen())], 1, &[(0, 1.0), (1, 1.0)]);
        let v = analyze(&data, &AnalyzeOptions { samples: 16, ..Default::default() }).unwrap();
        assert!(!v.fredholm);
        assert_eq!(v.classification, Classification::NotFredholm);
    }

    #[test]
    fn klein_fredholm_but_not_elliptic() {
        let g = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let gens = vec![(2usize, antipodal_gen()), (1usize, IsometryDescriptor::identity(1))];
        let data = constant_data(g, &gens, 1, &[(0, 1.0), (1, 1.0)]);
        let v = analyze(&data, &AnalyzeOptions { samples: 16, ..Default::default() }).unwrap();
        assert!(v.fredholm);
        assert_eq!(v.classification, Classification::FredholmNonElliptic);
        assert!(v.min_full_sv < 1e-12);
        assert!((v.components[0].min_restricted_sv - 2.0).abs() < 1e-10);
    }

    #[test]
    fn trivial_reduction_agrees_with_analyze() {
        let g = FiniteGroup::cyclic(3);
        let gens = vec![(1usize, IsometryDescriptor::identity(1))];
        // sum = 1 + 0.5 + 0.25 = 1.75 invertible
        let data = constant_data(g.clone(), &gens, 1, &[(0, 1.0), (1, 0.5), (2, 0.25)]);
        let opts = AnalyzeOptions { samples: 16, ..Default::default() };
        let fast = trivial_action_reduce(&data, &opts).unwrap();
        let slow = analyze(&data, &opts).unwrap();
        assert_eq!(fast.fredholm, slow.fredholm);
        assert!((fast.min_full_sv - 1.75).abs() < 1e-12);

        // sum = 0: both must refuse Fredholmness
        let zero = constant_data(g, &gens, 1, &[(0, 1.0), (1, -0.5), (2, -0.5)]);
        let fast = trivial_action_reduce(&zero, &opts).unwrap();
        let slow = analyze(&zero, &opts).unwrap();
        assert!(!fast.fredholm && !slow.fredholm);

        // non-trivial action must be rejected
        let anti = constant_data(FiniteGroup::cyclic(2), &[(1, antipodal_gen())], 1, &[(0, 2.0)]);
        assert!(matches!(trivial_action_reduce(&anti, &opts), Err(Error::NotTrivialAction)));
    }

    #[test]
    fn quotient_rewrite_klein_over_trivial_factor() {
        let g = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let gens = vec![(2usize, antipodal_gen()), (1usize, IsometryDescriptor::identity(1))];
        // a_e = 3, a_b = 1, a_a = 1: quotient by {e, b} sums cosets
        let data = constant_data(g, &gens, 1, &[(0, 3.0), (1, 1.0), (2, 1.0)]);
        let h = Subgroup::new(&data.action.group, vec![0, 1]).unwrap();
        let q = quotient_rewrite(&data, &h).unwrap();
        assert_eq!(q.action.group.order(), 2);
        let opts = AnalyzeOptions { samples: 16, ..Default::default() };
        let v0 = analyze(&data, &opts).unwrap();
        let v1 = analyze(&q, &opts).unwrap();
        assert_eq!(v0.fredholm, v1.fredholm);
        assert!((v0.components[0].min_restricted_sv - v1.components[0].min_restricted_sv).abs() < 1e-10);

        // subgroup that moves points is rejected
        let bad = Subgroup::new(&data.action.group, vec![0, 2]).unwrap();
        assert!(matches!(quotient_rewrite(&data, &bad), Err(Error::NotTriviallyActing)));
    }

    #[test]
    fn homogeneous_rewrite_swap_of_two_circles() {
        let g = FiniteGroup::cyclic(2);
        let swap = IsometryDescriptor {
            copy_perm: vec![1, 0],
            per_copy: vec![CopyMap::identity(); 2],
        };
        let data = constant_data(g, &[(1, swap)], 2, &[(0, 2.0), (1, 1.0)]);
        let rewritten = homogeneous_rewrite(&data).unwrap();
        assert_eq!(rewritten.fiber_rank(), 2);
        let pt = CotangentPoint::new(0, 0.3, 1);
        let m = rewritten.eval_symbol(0, pt);
        assert!((m[(0, 0)] - c(2.0)).norm() < 1e-14);
        assert!((m[(0, 1)] - c(1.0)).norm() < 1e-14);
        assert!((m[(1, 0)] - c(1.0)).norm() < 1e-14);
        assert!((m[(1, 1)] - c(2.0)).norm() < 1e-14);
        let opts = AnalyzeOptions { samples: 16, ..Default::default() };
        let v0 = analyze(&data, &opts).unwrap();
        let v1 = analyze(&rewritten, &opts).unwrap();
        assert_eq!(v0.fredholm, v1.fredholm);

        // a rotating action is not a pure coset bundle
        let anti = constant_data(FiniteGroup::cyclic(2), &[(1, antipodal_gen())], 1, &[(0, 1.0)]);
        assert!(matches!(homogeneous_rewrite(&anti), Err(Error::NotCosetAction(_))));
    }

    #[test]
    fn two_component_verdict_is_a_conjunction() {
        // antipodal map on each of two unswapped circles; elliptic on copy 0,
        // degenerate on copy 1
        let g = FiniteGroup::cyclic(2);
        let gen = IsometryDescriptor {
            copy_perm: vec![0, 1],
            per_copy: vec![
                CopyMap { angle: Turn::half(), orientation: 1 },
                CopyMap { angle: Turn::half(), orientation: 1 },
            ],
        };
        let rep = UnitaryRep::trivial(&g, 1);
        let action = build_action(g, ModelManifold::circles(2), &[(1, gen)], rep).unwrap();
        let mk = |v0: f64, v1: f64| {
            TrigMatrixSymbol::new(
                1,
                vec![
                    BranchPair::constant_scalar(c(v0)),
                    BranchPair::constant_scalar(c(v1)),
                ],
            )
            .unwrap()
        };
        let mut symbols = BTreeMap::new();
        symbols.insert(0, mk(2.0, 1.0));
        symbols.insert(1, mk(1.0, 1.0));
        let data = GammaSymbolData::new(action, symbols).unwrap();
        let v = analyze(&data, &AnalyzeOptions { samples: 16, ..Default::default() }).unwrap();
        assert_eq!(v.components.len(), 2);
        assert!(v.components[0].fredholm);
        assert!(!v.components[1].fredholm);
        assert!(!v.fredholm);
    }
}
