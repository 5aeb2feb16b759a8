//! Finite groups as multiplication tables, with subgroups, the regular
//! representations and averaging projectors.
//!
//! Elements are indices `0..n`. Everything downstream only needs products,
//! inverses and enumeration, so a validated table is the whole story.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{adjoint, cone, czero, identity, matmul, max_abs_diff, CMat};

pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validate an explicit multiplication table and derive identity and inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NonGroupTable("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonGroupTable(format!("row {i} has length {}", row.len())));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::NonGroupTable(format!("entry {v} out of range in row {i}")));
                }
            }
        }
        // Latin square: each row and column is a permutation.
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                if seen_row[table[i][j]] {
                    return Err(Error::NonGroupTable(format!("row {i} repeats element {}", table[i][j])));
                }
                seen_row[table[i][j]] = true;
                if seen_col[table[j][i]] {
                    return Err(Error::NonGroupTable(format!("column {i} repeats element {}", table[j][i])));
                }
                seen_col[table[j][i]] = true;
            }
        }
        // Identity.
        let mut identity = None;
        'outer: for e in 0..n {
            for i in 0..n {
                if table[e][i] != i || table[i][e] != i {
                    continue 'outer;
                }
            }
            identity = Some(e);
            break;
        }
        let identity = identity.ok_or_else(|| Error::NonGroupTable("no identity element".into()))?;
        // Associativity.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if table[table[i][j]][k] != table[i][table[j][k]] {
                        return Err(Error::NonGroupTable(format!(
                            "associativity fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        // Inverses.
        let mut inverse = vec![0usize; n];
        for i in 0..n {
            let inv = (0..n)
                .find(|&j| table[i][j] == identity && table[j][i] == identity)
                .ok_or_else(|| Error::NonGroupTable(format!("element {i} has no inverse")))?;
            inverse[i] = inv;
        }
        Ok(FiniteGroup { order: n, table, identity, inverse })
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_table(table).expect("cyclic table is a group")
    }

    /// Dihedral group of order `2n`; indices `0..n` are rotations `r^i`,
    /// indices `n..2n` are reflections `s r^(i-n)`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let m = 2 * n;
        let mut table = vec![vec![0usize; m]; m];
        for i in 0..m {
            for j in 0..m {
                let (si, a) = (i >= n, i % n);
                let (sj, b) = (j >= n, j % n);
                // s r^a s r^b = r^{b-a}; r^a s r^b = s r^{b-a}; s r^a r^b = s r^{a+b}
                table[i][j] = match (si, sj) {
                    (false, false) => (a + b) % n,
                    (false, true) => n + (n + b - a) % n,
                    (true, false) => n + (a + b) % n,
                    (true, true) => (n + b - a) % n,
                };
            }
        }
        Self::from_table(table).expect("dihedral table is a group")
    }

    /// Direct product; element `(a, b)` has index `a * |B| + b`.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let (ia, ib) = (i / nb, i % nb);
                let (ja, jb) = (j / nb, j % nb);
                table[i][j] = a.mul(ia, ja) * nb + b.mul(ib, jb);
            }
        }
        Self::from_table(table).expect("product table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Smallest `m > 0` with `g^m = e`.
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut m = 1;
        while x != self.identity {
            x = self.mul(x, g);
            m += 1;
        }
        m
    }

    pub fn subgroup_generated_by(&self, gens: &[usize]) -> Subgroup {
        let mut members = vec![self.identity];
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !members.contains(&y) {
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn whole_subgroup(&self) -> Subgroup {
        Subgroup { members: self.elements().collect() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![self.identity] }
    }
}

/// Named-group descriptor; the scenario file's group field parses into this.
#[derive(Clone, Debug)]
pub enum GroupDescriptor {
    Cyclic(usize),
    Dihedral(usize),
    Product(Box<GroupDescriptor>, Box<GroupDescriptor>),
    Table(Vec<Vec<usize>>),
}

pub fn build_group(desc: &GroupDescriptor) -> Result<FiniteGroup> {
    match desc {
        GroupDescriptor::Cyclic(n) => {
            if *n == 0 {
                return Err(Error::NonGroupTable("cyclic group order must be positive".into()));
            }
            Ok(FiniteGroup::cyclic(*n))
        }
        GroupDescriptor::Dihedral(n) => {
            if *n == 0 {
                return Err(Error::NonGroupTable("dihedral parameter must be positive".into()));
            }
            Ok(FiniteGroup::dihedral(*n))
        }
        GroupDescriptor::Product(a, b) => {
            Ok(FiniteGroup::product(&build_group(a)?, &build_group(b)?))
        }
        GroupDescriptor::Table(t) => FiniteGroup::from_table(t.clone()),
    }
}

/// A subgroup given by its sorted member list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn new(group: &FiniteGroup, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if !members.contains(&group.identity()) {
            return Err(Error::NonGroupTable("subgroup misses the identity".into()));
        }
        for &a in &members {
            if a >= group.order() {
                return Err(Error::NonGroupTable(format!("subgroup member {a} out of range")));
            }
            if !members.contains(&group.inv(a)) {
                return Err(Error::NonGroupTable(format!("subgroup not closed under inverse at {a}")));
            }
            for &b in &members {
                if !members.contains(&group.mul(a, b)) {
                    return Err(Error::NonGroupTable(format!(
                        "subgroup not closed under product at ({a},{b})"
                    )));
                }
            }
        }
        Ok(Subgroup { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_normal(&self, group: &FiniteGroup) -> bool {
        group.elements().all(|g| {
            self.members
                .iter()
                .all(|&h| self.contains(group.mul(group.mul(g, h), group.inv(g))))
        })
    }

    /// Left cosets, each sorted, ordered by their smallest representative.
    pub fn left_cosets(&self, group: &FiniteGroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; group.order()];
        let mut cosets = Vec::new();
        for g in group.elements() {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> = self.members.iter().map(|&h| group.mul(g, h)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }
}

/// `gamma H gamma^{-1}`.
pub fn conjugate_subgroup(group: &FiniteGroup, h: &Subgroup, gamma: usize) -> Subgroup {
    let mut members: Vec<usize> = h
        .members()
        .iter()
        .map(|&x| group.mul(group.mul(gamma, x), group.inv(gamma)))
        .collect();
    members.sort_unstable();
    Subgroup { members }
}

/// An element of the group algebra C[Gamma]: one complex coefficient per delta_gamma.
#[derive(Clone, Debug)]
pub struct GroupAlgebraVector {
    pub coeffs: Vec<Complex64>,
}

impl GroupAlgebraVector {
    pub fn zero(group: &FiniteGroup) -> Self {
        GroupAlgebraVector { coeffs: vec![czero(); group.order()] }
    }

    pub fn delta(group: &FiniteGroup, gamma: usize) -> Self {
        let mut v = Self::zero(group);
        v.coeffs[gamma] = cone();
        v
    }

    /// The constant function `1_Gamma`.
    pub fn one(group: &FiniteGroup) -> Self {
        GroupAlgebraVector { coeffs: vec![cone(); group.order()] }
    }

    /// Convolution product: `delta_a * delta_b = delta_{ab}`.
    pub fn convolve(&self, other: &Self, group: &FiniteGroup) -> Self {
        let mut out = Self::zero(group);
        for a in group.elements() {
            if self.coeffs[a] == czero() {
                continue;
            }
            for b in group.elements() {
                out.coeffs[group.mul(a, b)] += self.coeffs[a] * other.coeffs[b];
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A unitary representation as one matrix per group element.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    dim: usize,
    matrices: Vec<CMat>,
}

impl UnitaryRep {
    /// Validate homomorphism and unitarity to `UNITARY_TOL`.
    pub fn new(group: &FiniteGroup, matrices: Vec<CMat>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::NotAHomomorphism(format!(
                "expected {} matrices, got {}",
                group.order(),
                matrices.len()
            )));
        }
        let dim = matrices[0].nrows();
        for (g, m) in matrices.iter().enumerate() {
            if m.dim() != (dim, dim) {
                return Err(Error::NotAHomomorphism(format!("matrix for element {g} is not {dim}x{dim}")));
            }
            let uut = matmul(m, &adjoint(m));
            if max_abs_diff(&uut, &identity(dim)) > UNITARY_TOL {
                return Err(Error::NotAHomomorphism(format!("matrix for element {g} is not unitary")));
            }
        }
        for i in group.elements() {
            for j in group.elements() {
                let prod = matmul(&matrices[i], &matrices[j]);
                if max_abs_diff(&prod, &matrices[group.mul(i, j)]) > UNITARY_TOL {
                    return Err(Error::NotAHomomorphism(format!(
                        "rho({i})rho({j}) != rho({i}{j})"
                    )));
                }
            }
        }
        Ok(UnitaryRep { dim, matrices })
    }

    pub fn trivial(group: &FiniteGroup, dim: usize) -> Self {
        UnitaryRep { dim, matrices: vec![identity(dim); group.order()] }
    }

    /// Complete a representation from matrices given on a generating set.
    pub fn from_generators(group: &FiniteGroup, gens: &[(usize, CMat)]) -> Result<Self> {
        let dim = if gens.is_empty() { 1 } else { gens[0].1.nrows() };
        let mut matrices: Vec<Option<CMat>> = vec![None; group.order()];
        matrices[group.identity()] = Some(identity(dim));
        let mut frontier = vec![group.identity()];
        while let Some(x) = frontier.pop() {
            for (g, m) in gens {
                let y = group.mul(x, *g);
                let my = matmul(matrices[x].as_ref().unwrap(), m);
                match &matrices[y] {
                    None => {
                        matrices[y] = Some(my);
                        frontier.push(y);
                    }
                    Some(existing) => {
                        if max_abs_diff(existing, &my) > UNITARY_TOL {
                            return Err(Error::NotAHomomorphism(format!(
                                "fiber matrices are inconsistent at element {y}"
                            )));
                        }
                    }
                }
            }
        }
        let matrices: Vec<CMat> = matrices
            .into_iter()
            .enumerate()
            .map(|(g, m)| {
                m.ok_or_else(|| Error::NotAHomomorphism(format!("generators do not reach element {g}")))
            })
            .collect::<Result<_>>()?;
        Self::new(group, matrices)
    }

    /// Left or right regular representation by permutation matrices.
    ///
    /// `L_g delta_h = delta_{gh}`, `R_g delta_h = delta_{h g^{-1}}`.
    pub fn regular(group: &FiniteGroup, side: Side) -> Self {
        let n = group.order();
        let matrices = group
            .elements()
            .map(|g| {
                let mut m = Array2::from_elem((n, n), czero());
                for h in group.elements() {
                    let target = match side {
                        Side::Left => group.mul(g, h),
                        Side::Right => group.mul(h, group.inv(g)),
                    };
                    m[[target, h]] = cone();
                }
                m
            })
            .collect();
        UnitaryRep { dim: n, matrices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CMat {
        &self.matrices[g]
    }

    pub fn is_trivial(&self) -> bool {
        let id = identity(self.dim);
        self.matrices.iter().all(|m| max_abs_diff(m, &id) <= UNITARY_TOL)
    }
}

/// Isotypic averaging projector `P = (1/|H|) sum_{h in H} rho(h)`.
pub fn averaging_projector(rep: &UnitaryRep, h: &Subgroup) -> CMat {
    let mut p = Array2::from_elem((rep.dim(), rep.dim()), czero());
    for &g in h.members() {
        p += rep.matrix(g);
    }
    p.mapv_into(|z| z / h.len() as f64)
}
