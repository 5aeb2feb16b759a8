//! Model manifolds (disjoint unions of circles, plus a flat 2-torus demo),
//! isometric finite-group actions and their orbit-type analysis.
//!
//! Every isometry of a circle union is a copy permutation together with a
//! rotation or reflection per copy, so fixed sets and isotropy groups are
//! computed exactly from rational angle data.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::angle::Turn;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, UnitaryRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ManifoldKind {
    CircleUnion,
    Torus2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelManifold {
    pub kind: ManifoldKind,
    pub copies: usize,
}

impl ModelManifold {
    pub fn circles(copies: usize) -> Self {
        assert!(copies >= 1);
        ModelManifold { kind: ManifoldKind::CircleUnion, copies }
    }

    pub fn torus2() -> Self {
        ModelManifold { kind: ManifoldKind::Torus2, copies: 1 }
    }
}

/// `theta -> orientation * theta + angle` on the target copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CopyMap {
    pub angle: Turn,
    pub orientation: i8,
}

impl CopyMap {
    pub fn identity() -> Self {
        CopyMap { angle: Turn::zero(), orientation: 1 }
    }

    pub fn is_identity(&self) -> bool {
        self.angle.is_zero() && self.orientation == 1
    }
}

/// One isometry of a circle union: a copy permutation plus a per-source-copy
/// rotation/reflection applied on the target copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryDescriptor {
    pub copy_perm: Vec<usize>,
    pub per_copy: Vec<CopyMap>,
}

impl IsometryDescriptor {
    pub fn identity(copies: usize) -> Self {
        IsometryDescriptor {
            copy_perm: (0..copies).collect(),
            per_copy: vec![CopyMap::identity(); copies],
        }
    }

    pub fn validate(&self, copies: usize) -> Result<()> {
        if self.copy_perm.len() != copies || self.per_copy.len() != copies {
            return Err(Error::BadPermutation(format!(
                "descriptor covers {} copies, manifold has {copies}",
                self.copy_perm.len()
            )));
        }
        let mut seen = vec![false; copies];
        for &t in &self.copy_perm {
            if t >= copies || seen[t] {
                return Err(Error::BadPermutation("copy_perm is not a bijection".into()));
            }
            seen[t] = true;
        }
        for m in &self.per_copy {
            if m.orientation != 1 && m.orientation != -1 {
                return Err(Error::BadPermutation("orientation must be +1 or -1".into()));
            }
        }
        Ok(())
    }

    /// `self` after `first`: the map `x -> self(first(x))`.
    pub fn compose(&self, first: &IsometryDescriptor) -> IsometryDescriptor {
        let copies = self.copy_perm.len();
        let mut copy_perm = vec![0usize; copies];
        let mut per_copy = vec![CopyMap::identity(); copies];
        for c in 0..copies {
            let mid = first.copy_perm[c];
            copy_perm[c] = self.copy_perm[mid];
            let m1 = first.per_copy[c];
            let m2 = self.per_copy[mid];
            per_copy[c] = CopyMap {
                orientation: m1.orientation * m2.orientation,
                angle: m1.angle.oriented(m2.orientation) + m2.angle,
            };
        }
        IsometryDescriptor { copy_perm, per_copy }
    }

    pub fn inverse(&self) -> IsometryDescriptor {
        let copies = self.copy_perm.len();
        let mut copy_perm = vec![0usize; copies];
        let mut per_copy = vec![CopyMap::identity(); copies];
        for c in 0..copies {
            let t = self.copy_perm[c];
            copy_perm[t] = c;
            let m = self.per_copy[c];
            per_copy[t] = CopyMap {
                orientation: m.orientation,
                angle: (-m.angle).oriented(m.orientation),
            };
        }
        IsometryDescriptor { copy_perm, per_copy }
    }

    pub fn is_identity(&self) -> bool {
        self.copy_perm.iter().enumerate().all(|(i, &t)| i == t)
            && self.per_copy.iter().all(|m| m.is_identity())
    }

    /// Image of the base point `(copy, theta)`.
    pub fn apply(&self, copy: usize, theta: Turn) -> (usize, Turn) {
        let m = self.per_copy[copy];
        (self.copy_perm[copy], theta.oriented(m.orientation) + m.angle)
    }
}

/// A finite group acting by isometries on a circle union, together with a
/// constant unitary action on the trivial bundle fiber.
#[derive(Clone, Debug)]
pub struct IsometricAction {
    pub group: FiniteGroup,
    pub manifold: ModelManifold,
    maps: Vec<IsometryDescriptor>,
    pub fiber_rep: UnitaryRep,
}

impl IsometricAction {
    pub fn map(&self, gamma: usize) -> &IsometryDescriptor {
        &self.maps[gamma]
    }

    pub fn fiber_rank(&self) -> usize {
        self.fiber_rep.dim()
    }

    pub fn is_geometrically_trivial(&self) -> bool {
        self.maps.iter().all(|m| m.is_identity())
    }

    /// True when `gamma` fixes copy `c` pointwise.
    pub fn acts_trivially_on_copy(&self, gamma: usize, c: usize) -> bool {
        let m = &self.maps[gamma];
        m.copy_perm[c] == c && m.per_copy[c].is_identity()
    }
}

/// Complete generator maps to the whole group and validate the homomorphism.
pub fn build_action(
    group: FiniteGroup,
    manifold: ModelManifold,
    generator_maps: &[(usize, IsometryDescriptor)],
    fiber_rep: UnitaryRep,
) -> Result<IsometricAction> {
    let copies = manifold.copies;
    for (g, d) in generator_maps {
        if *g >= group.order() {
            return Err(Error::NotAHomomorphism(format!("generator {g} is not a group element")));
        }
        d.validate(copies)?;
    }
    let mut maps: Vec<Option<IsometryDescriptor>> = vec![None; group.order()];
    maps[group.identity()] = Some(IsometryDescriptor::identity(copies));
    let mut frontier = vec![group.identity()];
    while let Some(x) = frontier.pop() {
        for (g, d) in generator_maps {
            let y = group.mul(*g, x);
            let dy = d.compose(maps[x].as_ref().unwrap());
            match &maps[y] {
                None => {
                    maps[y] = Some(dy);
                    frontier.push(y);
                }
                Some(existing) => {
                    if existing != &dy {
                        return Err(Error::NotAHomomorphism(format!(
                            "generator maps give two different isometries for element {y}"
                        )));
                    }
                }
            }
        }
    }
    let maps: Vec<IsometryDescriptor> = maps
        .into_iter()
        .enumerate()
        .map(|(g, m)| {
            m.ok_or_else(|| Error::NotAHomomorphism(format!("generators do not reach element {g}")))
        })
        .collect::<Result<_>>()?;
    // Full homomorphism check; angle arithmetic is exact so equality is exact.
    for a in group.elements() {
        for b in group.elements() {
            let ab = maps[a].compose(&maps[b]);
            if ab != maps[group.mul(a, b)] {
                return Err(Error::NotAHomomorphism(format!(
                    "maps[{a}] o maps[{b}] != maps[{}]",
                    group.mul(a, b)
                )));
            }
        }
    }
    if fiber_rep.dim() == 0 {
        return Err(Error::NotAHomomorphism("fiber rank must be positive".into()));
    }
    Ok(IsometricAction { group, manifold, maps, fiber_rep })
}

/// Exact stabilizer of the base point `(copy, theta)`.
pub fn isotropy_group(action: &IsometricAction, copy: usize, theta: Turn) -> Subgroup {
    let members: Vec<usize> = action
        .group
        .elements()
        .filter(|&g| action.map(g).apply(copy, theta) == (copy, theta))
        .collect();
    Subgroup::new(&action.group, members).expect("stabilizer is a subgroup")
}

/// Orbits of the copy permutation action: the quotient-connected components.
pub fn quotient_components(action: &IsometricAction) -> Vec<Vec<usize>> {
    let copies = action.manifold.copies;
    let mut seen = vec![false; copies];
    let mut components = Vec::new();
    for c in 0..copies {
        if seen[c] {
            continue;
        }
        let mut comp = vec![c];
        seen[c] = true;
        let mut frontier = vec![c];
        while let Some(x) = frontier.pop() {
            for g in action.group.elements() {
                let y = action.map(g).copy_perm[x];
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    frontier.push(y);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// Orbit-type report for one quotient component.
#[derive(Clone, Debug)]
pub struct IsotropyReport {
    pub component: Vec<usize>,
    pub gamma0: Subgroup,
    /// Isolated points with isotropy strictly larger than the principal type.
    pub special_points: Vec<(usize, Turn)>,
    pub verification: bool,
}

/// Minimal isotropy subgroup of a quotient component, computed exactly.
///
/// A generic point of a copy is stabilized exactly by the elements acting as
/// the identity on that copy; reflections contribute two special points each.
pub fn minimal_isotropy(action: &IsometricAction, component: &[usize]) -> Result<IsotropyReport> {
    assert!(!component.is_empty());
    let base = component[0];
    let members: Vec<usize> = action
        .group
        .elements()
        .filter(|&g| action.acts_trivially_on_copy(g, base))
        .collect();
    let gamma0 = Subgroup::new(&action.group, members)
        .map_err(|e| Error::InconsistentOrbitTypes(e.to_string()))?;

    let mut special_points: Vec<(usize, Turn)> = Vec::new();
    for &c in component {
        for g in action.group.elements() {
            if g == action.group.identity() {
                continue;
            }
            let m = action.map(g);
            if m.copy_perm[c] != c {
                continue;
            }
            let cm = m.per_copy[c];
            if cm.orientation == -1 {
                for t in cm.angle.halves() {
                    if !special_points.contains(&(c, t)) {
                        special_points.push((c, t));
                    }
                }
            }
        }
    }
    special_points.sort_unstable();

    // Every isotropy group on the component must contain a conjugate of gamma0.
    let conjugates: Vec<Subgroup> = action
        .group
        .elements()
        .map(|g| crate::group::conjugate_subgroup(&action.group, &gamma0, g))
        .collect();
    let contains_conjugate = |iso: &Subgroup| {
        conjugates
            .iter()
            .any(|conj| conj.members().iter().all(|&h| iso.contains(h)))
    };
    let mut verification = true;
    for &(c, t) in &special_points {
        let iso = isotropy_group(action, c, t);
        if !contains_conjugate(&iso) {
            verification = false;
        }
    }
    // Generic points of every copy must have isotropy conjugate to gamma0.
    for &c in component {
        let generic = Turn::new(1, 1_000_003).unwrap();
        let iso = isotropy_group(action, c, generic);
        if iso.len() != gamma0.len() || !contains_conjugate(&iso) {
            verification = false;
        }
    }
    if !verification {
        return Err(Error::InconsistentOrbitTypes(format!(
            "some isotropy group on component {component:?} does not contain a conjugate of the computed gamma0"
        )));
    }
    Ok(IsotropyReport { component: component.to_vec(), gamma0, special_points, verification })
}

/// A unit covector over a circle union.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CotangentPoint {
    pub copy: usize,
    pub theta: f64,
    pub xi: i8,
}

impl CotangentPoint {
    pub fn new(copy: usize, theta: f64, xi: i8) -> Self {
        assert!(xi == 1 || xi == -1);
        CotangentPoint { copy, theta: theta.rem_euclid(TAU), xi }
    }
}

/// Induced action on unit covectors: base point moves by the isometry, the
/// covector direction picks up the orientation sign.
pub fn cotangent_action(action: &IsometricAction, gamma: usize, pt: CotangentPoint) -> CotangentPoint {
    let m = action.map(gamma);
    let cm = m.per_copy[pt.copy];
    let theta = (cm.orientation as f64) * pt.theta + cm.angle.radians();
    CotangentPoint::new(m.copy_perm[pt.copy], theta, cm.orientation * pt.xi)
}

pub const ANGLE_TOL: f64 = 1e-10;

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

pub fn covector_fixed_by(action: &IsometricAction, gamma: usize, pt: CotangentPoint) -> bool {
    let q = cotangent_action(action, gamma, pt);
    q.copy == pt.copy && q.xi == pt.xi && angle_distance(q.theta, pt.theta) <= ANGLE_TOL
}

/// Deterministic sample of `S*M^{Gamma_0}` over the given component copies.
///
/// Copies on which `gamma0` acts trivially get a jittered uniform grid of
/// `count` base points and both covector signs. Copies with a finite
/// `gamma0`-fixed set contribute only the covectors at those points that the
/// induced cotangent action actually fixes.
pub fn sample_fixed_sphere(
    action: &IsometricAction,
    component: &[usize],
    gamma0: &Subgroup,
    count: usize,
    seed: u64,
) -> Result<Vec<CotangentPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut base_point_found = false;
    for &c in component {
        let trivial_here = gamma0.members().iter().all(|&h| action.acts_trivially_on_copy(h, c));
        if trivial_here {
            base_point_found = true;
            let jitter: f64 = rng.gen::<f64>();
            for i in 0..count {
                let theta = TAU * ((i as f64 + jitter) / count as f64);
                for xi in [1i8, -1i8] {
                    out.push(CotangentPoint::new(c, theta, xi));
                }
            }
        } else {
            // Intersect the exact fixed sets of the nontrivial elements.
            let mut candidates: Option<Vec<Turn>> = None;
            for &h in gamma0.members() {
                if action.acts_trivially_on_copy(h, c) {
                    continue;
                }
                let m = action.map(h);
                let fixed: Vec<Turn> = if m.copy_perm[c] != c {
                    Vec::new()
                } else {
                    let cm = m.per_copy[c];
                    if cm.orientation == 1 {
                        Vec::new() // nontrivial rotation: no fixed points
                    } else {
                        cm.angle.halves().to_vec()
                    }
                };
                candidates = Some(match candidates {
                    None => fixed,
                    Some(prev) => prev.into_iter().filter(|t| fixed.contains(t)).collect(),
                });
            }
            let candidates = candidates.unwrap_or_default();
            for t in candidates {
                base_point_found = true;
                for xi in [1i8, -1i8] {
                    let pt = CotangentPoint::new(c, t.radians(), xi);
                    if gamma0.members().iter().all(|&h| covector_fixed_by(action, h, pt)) {
                        out.push(pt);
                    }
                }
            }
        }
    }
    if !base_point_found {
        return Err(Error::EmptyFixedSet);
    }
    Ok(out)
}

/// Basis of the annihilator `{xi : xi . Y = 0 for all Y}` of the given
/// generator vector fields, inside R^dim.
pub fn transversal_fiber(vector_fields: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    const TOL: f64 = 1e-12;
    // Row-reduce the span of the vector fields, then read off the annihilator.
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for y in vector_fields {
        assert_eq!(y.len(), dim);
        let mut v = y.clone();
        for r in &rows {
            let pivot_col = r.iter().position(|x| x.abs() > TOL).unwrap();
            let factor = v[pivot_col] / r[pivot_col];
            for k in 0..dim {
                v[k] -= factor * r[k];
            }
        }
        if v.iter().any(|x| x.abs() > TOL) {
            rows.push(v);
            rows.sort_by_key(|r| r.iter().position(|x| x.abs() > TOL).unwrap());
        }
    }
    let pivot_cols: Vec<usize> = rows
        .iter()
        .map(|r| r.iter().position(|x| x.abs() > TOL).unwrap())
        .collect();
    // Solve xi . r = 0 for each reduced row, free variables = non-pivot columns.
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut xi = vec![0.0; dim];
        xi[free] = 1.0;
        for (r, &pc) in rows.iter().zip(&pivot_cols).rev() {
            let dot: f64 = (0..dim).map(|k| xi[k] * r[k]).sum();
            xi[pc] -= dot / r[pc];
        }
        basis.push(xi);
    }
    basis
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClopenVerdict {
    /// `P = M`: every sampled point has zero transversal fiber.
    AllClopen,
    /// `P` is empty.
    Empty,
    Mixed,
}

/// Flag the points whose transversal fiber vanishes; their orbits are clopen.
pub fn detect_clopen_orbits(fibers_per_point: &[Vec<Vec<f64>>]) -> (Vec<bool>, ClopenVerdict) {
    let flags: Vec<bool> = fibers_per_point.iter().map(|f| f.is_empty()).collect();
    let verdict = if flags.iter().all(|&b| b) {
        ClopenVerdict::AllClopen
    } else if flags.iter().all(|&b| !b) {
        ClopenVerdict::Empty
    } else {
        ClopenVerdict::Mixed
    };
    (flags, verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::UnitaryRep;

    pub fn z2_antipodal() -> IsometricAction {
        let g = FiniteGroup::cyclic(2);
        let rep = UnitaryRep::trivial(&g, 1);
        let d = IsometryDescriptor {
            copy_perm: vec![0],
            per_copy: vec![CopyMap { angle: Turn::half(), orientation: 1 }],
        };
        build_action(g, ModelManifold::circles(1), &[(1, d)], rep).unwrap()
    }

    pub fn z2_reflection() -> IsometricAction {
        let g = FiniteGroup::cyclic(2);
        let rep = UnitaryRep::trivial(&g, 1);
        let d = IsometryDescriptor {
            copy_perm: vec![0],
            per_copy: vec![CopyMap { angle: Turn::zero(), orientation: -1 }],
        };
        build_action(g, ModelManifold::circles(1), &[(1, d)], rep).unwrap()
    }

    /// Klein four-group: a = antipodal, b = trivial.
    pub fn klein_antipodal_trivial() -> IsometricAction {
        let g = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let rep = UnitaryRep::trivial(&g, 1);
        // index 2 = (1,0) = a (antipodal), index 1 = (0,1) = b (trivial)
        let a = IsometryDescriptor {
            copy_perm: vec![0],
            per_copy: vec![CopyMap { angle: Turn::half(), orientation: 1 }],
        };
        let b = IsometryDescriptor::identity(1);
        build_action(g, ModelManifold::circles(1), &[(2, a), (1, b)], rep).unwrap()
    }

    #[test]
    fn antipodal_action_squares_to_identity() {
        let action = z2_antipodal();
        assert!(action.map(1).compose(action.map(1)).is_identity());
    }

    #[test]
    fn z3_with_half_turn_generator_is_rejected() {
        let g = FiniteGroup::cyclic(3);
        let rep = UnitaryRep::trivial(&g, 1);
        let d = IsometryDescriptor {
            copy_perm: vec![0],
            per_copy: vec![CopyMap { angle: Turn::half(), orientation: 1 }],
        };
        let r = build_action(g, ModelManifold::circles(1), &[(1, d)], rep);
        assert!(matches!(r, Err(Error::NotAHomomorphism(_))));
    }

    #[test]
    fn reflection_isotropy() {
        let action = z2_reflection();
        assert_eq!(isotropy_group(&action, 0, Turn::zero()).len(), 2);
        assert_eq!(isotropy_group(&action, 0, Turn::half()).len(), 2);
        assert_eq!(isotropy_group(&action, 0, Turn::new(1, 3).unwrap()).len(), 1);
    }

    #[test]
    fn klein_isotropy_is_e_b_everywhere() {
        let action = klein_antipodal_trivial();
        for t in [Turn::zero(), Turn::new(1, 7).unwrap(), Turn::half()] {
            let iso = isotropy_group(&action, 0, t);
            assert_eq!(iso.members(), &[0, 1]);
        }
    }

    #[test]
    fn minimal_isotropy_fixtures() {
        let free = minimal_isotropy(&z2_antipodal(), &[0]).unwrap();
        assert_eq!(free.gamma0.members(), &[0]);

        let g = FiniteGroup::cyclic(2);
        let trivial = build_action(
            g.clone(),
            ModelManifold::circles(1),
            &[(1, IsometryDescriptor::identity(1))],
            UnitaryRep::trivial(&g, 1),
        )
        .unwrap();
        let r = minimal_isotropy(&trivial, &[0]).unwrap();
        assert_eq!(r.gamma0.members(), &[0, 1]);

        let klein = minimal_isotropy(&klein_antipodal_trivial(), &[0]).unwrap();
        assert_eq!(klein.gamma0.members(), &[0, 1]);
    }

    #[test]
    fn quotient_components_cases() {
        // two circles swapped -> one component
        let g = FiniteGroup::cyclic(2);
        let swap = IsometryDescriptor {
            copy_perm: vec![1, 0],
            per_copy: vec![CopyMap::identity(); 2],
        };
        let action = build_action(
            g.clone(),
            ModelManifold::circles(2),
            &[(1, swap)],
            UnitaryRep::trivial(&g, 1),
        )
        .unwrap();
        assert_eq!(quotient_components(&action), vec![vec![0, 1]]);

        // two circles, trivial action -> two components
        let trivial = build_action(
            g.clone(),
            ModelManifold::circles(2),
            &[(1, IsometryDescriptor::identity(2))],
            UnitaryRep::trivial(&g, 1),
        )
        .unwrap();
        assert_eq!(quotient_components(&trivial), vec![vec![0], vec![1]]);
    }

    #[test]
    fn cotangent_action_cases() {
        let refl = z2_reflection();
        let pt = CotangentPoint::new(0, 1.0, 1);
        let q = cotangent_action(&refl, 1, pt);
        assert_eq!(q.xi, -1);
        assert!(angle_distance(q.theta, TAU - 1.0) < 1e-12);

        let anti = z2_antipodal();
        let q = cotangent_action(&anti, 1, pt);
        assert_eq!(q.xi, 1);
        assert!(angle_distance(q.theta, 1.0 + TAU / 2.0) < 1e-12);

        let id = cotangent_action(&anti, 0, pt);
        assert_eq!(id, pt);
    }

    #[test]
    fn cotangent_action_is_an_action() {
        let action = klein_antipodal_trivial();
        let pt = CotangentPoint::new(0, 0.7, -1);
        for a in action.group.elements() {
            for b in action.group.elements() {
                let two_step = cotangent_action(&action, a, cotangent_action(&action, b, pt));
                let one_step = cotangent_action(&action, action.group.mul(a, b), pt);
                assert_eq!(two_step.copy, one_step.copy);
                assert_eq!(two_step.xi, one_step.xi);
                assert!(angle_distance(two_step.theta, one_step.theta) < 1e-12);
            }
        }
    }

    #[test]
    fn sample_fixed_sphere_free_action_covers_both_signs() {
        let action = z2_antipodal();
        let gamma0 = action.group.trivial_subgroup();
        let pts = sample_fixed_sphere(&action, &[0], &gamma0, 8, 42).unwrap();
        assert_eq!(pts.len(), 16);
        assert!(pts.iter().any(|p| p.xi == 1) && pts.iter().any(|p| p.xi == -1));
        // deterministic in the seed
        let again = sample_fixed_sphere(&action, &[0], &gamma0, 8, 42).unwrap();
        assert_eq!(pts, again);
    }

    #[test]
    fn reflection_fixed_points_carry_no_fixed_covectors() {
        let action = z2_reflection();
        let gamma0 = action.group.whole_subgroup();
        // gamma0 = Z/2 acting by reflection: fixed base points 0 and pi, but
        // the covector flips there, so no fixed covectors survive.
        let r = sample_fixed_sphere(&action, &[0], &gamma0, 8, 1).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn transversal_fiber_cases() {
        let b = transversal_fiber(&[vec![1.0, 0.0]], 2);
        assert_eq!(b, vec![vec![0.0, 1.0]]);
        let b = transversal_fiber(&[vec![1.0, 0.0], vec![0.0, 1.0]], 2);
        assert!(b.is_empty());
        let b = transversal_fiber(&[], 2);
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn clopen_demo_verdicts() {
        // S^1 rotating one factor of T^2: fiber span{(0,1)} everywhere
        let torus_fibers: Vec<_> = (0..10).map(|_| transversal_fiber(&[vec![1.0, 0.0]], 2)).collect();
        let (_, verdict) = detect_clopen_orbits(&torus_fibers);
        assert_eq!(verdict, ClopenVerdict::Empty);

        // S^1 acting on itself: fiber {0} everywhere
        let circle_fibers: Vec<_> = (0..10).map(|_| transversal_fiber(&[vec![1.0]], 1)).collect();
        let (_, verdict) = detect_clopen_orbits(&circle_fibers);
        assert_eq!(verdict, ClopenVerdict::AllClopen);

        // finite group: no generator fields, fiber = all of T*M
        let finite_fibers: Vec<_> = (0..10).map(|_| transversal_fiber(&[], 1)).collect();
        let (_, verdict) = detect_clopen_orbits(&finite_fibers);
        assert_eq!(verdict, ClopenVerdict::Empty);
    }
}
