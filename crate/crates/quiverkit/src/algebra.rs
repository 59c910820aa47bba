//! The bound quiver algebra engine.
//!
//! A [`Presentation`] is a quiver, a list of relations (exact-rational
//! linear combinations of parallel paths of length >= 2) and a nilpotency
//! bound `m` asserting that every path of length `m` lies in the ideal the
//! relations generate. [`compute_basis`] certifies that assertion and then
//! builds the finite-dimensional quotient:
//!
//! 1. *Certification.* Working in the span of all paths up to a growing
//!    degree, the ideal generated by the relations is closed under arrow
//!    multiplication **without truncation** (products that would leave the
//!    working space are skipped, so the span stays inside the ideal).  Every
//!    path of length `m` must reduce to zero against that span.  This is a
//!    sound certificate: membership in the span really is membership in the
//!    ideal.  Dimension stabilization between truncated quotients is *not*
//!    sound (relations like `x^2 - x^3` stabilize while the quotient is not
//!    admissible), which is why the extra work is done here.
//! 2. *Reduction.* With the certificate in hand the algebra equals the
//!    quotient of the length-truncated path space by the truncated ideal
//!    closure, which is computed exactly.  Basis elements are the non-pivot
//!    paths ("standard monomials") under the fixed path order: length first,
//!    then lexicographic on arrow names.  Pivots always sit on the largest
//!    path of a row, so normal forms rewrite long paths into shorter ones.
//!
//! Everything downstream (Cartan matrix, socles, idempotent algebras,
//! modules) is a query against the resulting [`AlgebraBasis`].

use crate::linalg::{RowSpace, SVec};
use crate::quiver::{enumerate_paths, Path, Quiver, VIdx};
use crate::scalar::{FieldError, FieldSpec, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("relation `{0}` has no terms")]
    EmptyRelation(String),
    #[error("relation `{0}` has a zero coefficient")]
    ZeroCoefficient(String),
    #[error("relation `{0}` repeats the path `{1}`")]
    DuplicateTerm(String, String),
    #[error("relation `{0}` mixes non-parallel paths")]
    NonParallel(String),
    #[error("relation `{0}` contains a path of length < 2; the ideal would not be admissible")]
    ShortRelationPath(String),
    #[error("nilpotency bound must be >= 2, got {0}")]
    BadBound(usize),
    #[error(
        "cannot certify that every path of length {bound} lies in the ideal \
         (tried working degrees up to {tried}); the quotient may be infinite-dimensional \
         or the presentation may need a larger working degree"
    )]
    NotFiniteDimensional { bound: usize, tried: usize },
    #[error("reduction forced a path of length < 2 to zero; the ideal is not admissible")]
    Inadmissible,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A linear combination of pairwise-distinct parallel paths of length >= 2
/// with nonzero exact-rational coefficients. Coefficients are stored as
/// rationals and mapped into the chosen field when a basis is computed.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub name: String,
    pub terms: Vec<(BigRational, Path)>,
}

impl Relation {
    pub fn validate(&self, quiver: &Quiver) -> Result<(), AlgebraError> {
        if self.terms.is_empty() {
            return Err(AlgebraError::EmptyRelation(self.name.clone()));
        }
        let mut seen = BTreeSet::new();
        let first = &self.terms[0].1;
        for (c, p) in &self.terms {
            if c.is_zero() {
                return Err(AlgebraError::ZeroCoefficient(self.name.clone()));
            }
            if p.len() < 2 {
                return Err(AlgebraError::ShortRelationPath(self.name.clone()));
            }
            if !seen.insert(p.clone()) {
                return Err(AlgebraError::DuplicateTerm(
                    self.name.clone(),
                    p.display(quiver),
                ));
            }
            if p.source != first.source || p.target(quiver) != first.target(quiver) {
                return Err(AlgebraError::NonParallel(self.name.clone()));
            }
        }
        Ok(())
    }

    /// Convenience constructor for integer-coefficient relations given as
    /// `(coefficient, arrow names)` terms.
    pub fn of_paths(
        quiver: &Quiver,
        name: &str,
        terms: &[(i64, &[&str])],
    ) -> Result<Relation, AlgebraError> {
        let mut out = Vec::new();
        for (c, names) in terms {
            let arrows: Vec<usize> = names
                .iter()
                .map(|n| quiver.arrow_by_name(n))
                .collect::<Result<_, _>>()
                .map_err(|_| AlgebraError::EmptyRelation(name.to_string()))?;
            let source = quiver.arrow(arrows[0]).source;
            let path = Path::new(quiver, source, arrows)
                .map_err(|_| AlgebraError::NonParallel(name.to_string()))?;
            out.push((BigRational::from_integer(BigInt::from(*c)), path));
        }
        let rel = Relation {
            name: name.to_string(),
            terms: out,
        };
        rel.validate(quiver)?;
        Ok(rel)
    }
}

/// A quiver together with relation generators and a nilpotency bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub bound: usize,
}

impl Presentation {
    pub fn new(
        quiver: Quiver,
        relations: Vec<Relation>,
        bound: usize,
    ) -> Result<Presentation, AlgebraError> {
        if bound < 2 {
            return Err(AlgebraError::BadBound(bound));
        }
        for r in &relations {
            r.validate(&quiver)?;
        }
        Ok(Presentation {
            quiver,
            relations,
            bound,
        })
    }

    /// The `path precedes ideal` predicate: true iff the path appears as a
    /// summand of one of the supplied relation generators. This is relative
    /// to the presentation; the engine never rewrites presentations behind
    /// the caller's back.
    pub fn path_precedes(&self, path: &Path) -> bool {
        self.relations
            .iter()
            .any(|r| r.terms.iter().any(|(_, p)| p == path))
    }

    /// All relation summands of the given length, deduplicated and in path
    /// order.
    pub fn summands_of_length(&self, len: usize) -> Vec<Path> {
        let mut out: BTreeSet<Path> = BTreeSet::new();
        for r in &self.relations {
            for (_, p) in &r.terms {
                if p.len() == len {
                    out.insert(p.clone());
                }
            }
        }
        let mut v: Vec<Path> = out.into_iter().collect();
        v.sort_by_key(|a| a.order_key(&self.quiver));
        v
    }

    pub fn max_term_len(&self) -> usize {
        self.relations
            .iter()
            .flat_map(|r| r.terms.iter().map(|(_, p)| p.len()))
            .max()
            .unwrap_or(2)
    }
}

/// Interned path space up to a fixed length. Column 0 is the *largest* path
/// under (length, lex) so that row reduction pivots on leading terms.
pub(crate) struct PathTable {
    pub paths: Vec<Path>,
    index: BTreeMap<Path, usize>,
}

impl PathTable {
    pub fn build(quiver: &Quiver, max_len: usize) -> PathTable {
        let mut paths = enumerate_paths(quiver, max_len, None, None);
        paths.reverse();
        let index = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        PathTable { paths, index }
    }

    pub fn id(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn path(&self, id: usize) -> &Path {
        &self.paths[id]
    }
}

fn relation_vector(
    rel: &Relation,
    table: &PathTable,
    field: FieldSpec,
    truncate: bool,
) -> Result<Option<SVec>, AlgebraError> {
    let mut v = SVec::new();
    for (c, p) in &rel.terms {
        match table.id(p) {
            Some(col) => v.push(col, field.from_rational(c)?),
            None => {
                if !truncate {
                    // a term sticks out of the working space
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(v))
}

enum Side {
    Left,
    Right,
}

/// Multiplies a class-homogeneous row by an arrow. In truncating mode terms
/// that leave the table are dropped (legitimate modulo the nilpotency
/// ideal); otherwise the whole product is skipped so that the span stays
/// inside the exact ideal.
fn multiply_row(
    quiver: &Quiver,
    table: &PathTable,
    row: &SVec,
    arrow: usize,
    side: Side,
    truncate: bool,
) -> Option<SVec> {
    let mut out = SVec::new();
    for (&col, coeff) in &row.entries {
        let p = table.path(col);
        let q = match side {
            Side::Left => Path::of_arrow(quiver, arrow).compose(quiver, p)?,
            Side::Right => p.compose(quiver, &Path::of_arrow(quiver, arrow))?,
        };
        match table.id(&q) {
            Some(c) => out.push(c, coeff.clone()),
            None => {
                if !truncate {
                    return None;
                }
            }
        }
    }
    Some(out)
}

/// Closes the span of the generators under arrow multiplication on both
/// sides, staying within the table.
fn ideal_closure(quiver: &Quiver, table: &PathTable, gens: Vec<SVec>, truncate: bool) -> RowSpace {
    let mut space = RowSpace::new();
    let mut queue: VecDeque<SVec> = VecDeque::new();
    for g in gens {
        if let Some(r) = space.insert(g) {
            queue.push_back(r);
        }
    }
    while let Some(row) = queue.pop_front() {
        for arrow in 0..quiver.arrow_count() {
            for side in [Side::Left, Side::Right] {
                if let Some(prod) = multiply_row(quiver, table, &row, arrow, side, truncate) {
                    if let Some(r) = space.insert(prod) {
                        queue.push_back(r);
                    }
                }
            }
        }
    }
    space
}

/// Normal-form coordinates on the standard-monomial basis.
pub type Elem = Vec<(usize, Scalar)>;

/// Basis and multiplication table of the quotient algebra.
pub struct AlgebraBasis {
    pub field: FieldSpec,
    pub quiver: Quiver,
    pub bound: usize,
    /// Working degree at which admissibility was certified.
    pub certified_at: usize,
    table_paths: PathTable,
    reducer: RowSpace,
    /// Standard monomials in ascending (length, lex) order.
    pub basis_paths: Vec<Path>,
    path_to_basis: BTreeMap<Path, usize>,
    by_pair: BTreeMap<(VIdx, VIdx), Vec<usize>>,
    trivial: Vec<usize>,
    table: Vec<Vec<Elem>>,
}

/// Options for [`compute_basis_with`]; `max_certify_degree` caps the
/// working degree of the admissibility certificate.
#[derive(Clone, Copy, Debug, Default)]
pub struct BasisOptions {
    pub max_certify_degree: Option<usize>,
}

pub fn compute_basis(pres: &Presentation, field: FieldSpec) -> Result<AlgebraBasis, AlgebraError> {
    compute_basis_with(pres, field, BasisOptions::default())
}

pub fn compute_basis_with(
    pres: &Presentation,
    field: FieldSpec,
    opts: BasisOptions,
) -> Result<AlgebraBasis, AlgebraError> {
    let quiver = &pres.quiver;
    let m = pres.bound;
    for r in &pres.relations {
        r.validate(quiver)?;
    }

    // 1. certify that every path of length m lies in the ideal
    let cap = opts
        .max_certify_degree
        .unwrap_or(m + pres.max_term_len() + 5);
    let mut certified_at = None;
    for n in m..=cap.max(m) {
        let table = PathTable::build(quiver, n);
        let length_m: Vec<usize> = (0..table.paths.len())
            .filter(|&i| table.path(i).len() == m)
            .collect();
        if length_m.is_empty() {
            certified_at = Some(n);
            break;
        }
        let mut gens = Vec::new();
        for r in &pres.relations {
            if let Some(v) = relation_vector(r, &table, field, false)? {
                gens.push(v);
            }
        }
        let span = ideal_closure(quiver, &table, gens, false);
        if length_m
            .iter()
            .all(|&col| span.contains(SVec::singleton(col, field.one())))
        {
            certified_at = Some(n);
            break;
        }
    }
    let certified_at = certified_at.ok_or(AlgebraError::NotFiniteDimensional {
        bound: m,
        tried: cap,
    })?;

    // 2. exact truncated quotient on paths of length < m
    let table_paths = PathTable::build(quiver, m - 1);
    let mut gens = Vec::new();
    for r in &pres.relations {
        if let Some(v) = relation_vector(r, &table_paths, field, true)? {
            if !v.is_zero() {
                gens.push(v);
            }
        }
    }
    let reducer = ideal_closure(quiver, &table_paths, gens, true);
    for pivot in reducer.pivots() {
        if table_paths.path(pivot).len() < 2 {
            return Err(AlgebraError::Inadmissible);
        }
    }

    // 3. basis = non-pivot paths, listed in ascending path order
    let pivots: BTreeSet<usize> = reducer.pivots().collect();
    let mut basis_cols: Vec<usize> = (0..table_paths.paths.len())
        .filter(|c| !pivots.contains(c))
        .collect();
    basis_cols.reverse(); // ascending (length, lex)
    let basis_paths: Vec<Path> = basis_cols
        .iter()
        .map(|&c| table_paths.path(c).clone())
        .collect();
    let path_to_basis: BTreeMap<Path, usize> = basis_paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let mut by_pair: BTreeMap<(VIdx, VIdx), Vec<usize>> = BTreeMap::new();
    for (i, p) in basis_paths.iter().enumerate() {
        by_pair
            .entry((p.source, p.target(quiver)))
            .or_default()
            .push(i);
    }
    let mut trivial = vec![usize::MAX; quiver.vertex_count()];
    for (i, p) in basis_paths.iter().enumerate() {
        if p.is_empty() {
            trivial[p.source] = i;
        }
    }
    if trivial.contains(&usize::MAX) {
        return Err(AlgebraError::Inadmissible);
    }

    let mut basis = AlgebraBasis {
        field,
        quiver: quiver.clone(),
        bound: m,
        certified_at,
        table_paths,
        reducer,
        basis_paths,
        path_to_basis,
        by_pair,
        trivial,
        table: Vec::new(),
    };

    // 4. multiplication table over the basis
    let n = basis.basis_paths.len();
    let mut table = vec![vec![Vec::new(); n]; n];
    for (i, p) in basis.basis_paths.iter().enumerate() {
        for (j, q) in basis.basis_paths.iter().enumerate() {
            if let Some(pq) = p.compose(quiver, q) {
                table[i][j] = basis.reduce_path(&pq);
            }
        }
    }
    basis.table = table;

    // sanity: relations reduce to zero and the trivial paths act as the unit
    for r in &pres.relations {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, p) in &r.terms {
            let coeff = field.from_rational(c)?;
            for (b, s) in basis.reduce_path(p) {
                let cur = acc.remove(&b).unwrap_or_else(|| field.zero());
                let v = cur.add(&coeff.mul(&s));
                if !v.is_zero() {
                    acc.insert(b, v);
                }
            }
        }
        assert!(
            acc.is_empty(),
            "relation `{}` does not reduce to zero",
            r.name
        );
    }
    for i in 0..n {
        let (s, t) = basis.basis_pair(i);
        assert_eq!(
            basis.multiply_basis(basis.trivial[s], i),
            &[(i, field.one())][..]
        );
        assert_eq!(
            basis.multiply_basis(i, basis.trivial[t]),
            &[(i, field.one())][..]
        );
    }

    Ok(basis)
}

impl AlgebraBasis {
    pub fn dim(&self) -> usize {
        self.basis_paths.len()
    }

    /// (source, target) vertex pair of a basis element.
    pub fn basis_pair(&self, i: usize) -> (VIdx, VIdx) {
        let p = &self.basis_paths[i];
        (p.source, p.target(&self.quiver))
    }

    pub fn pair_basis(&self, a: VIdx, b: VIdx) -> &[usize] {
        self.by_pair
            .get(&(a, b))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn trivial_idx(&self, v: VIdx) -> usize {
        self.trivial[v]
    }

    /// Index of a path that happens to be a basis element (arrows always
    /// are).
    pub fn basis_index_of(&self, p: &Path) -> Option<usize> {
        self.path_to_basis.get(p).copied()
    }

    /// Normal form of an arbitrary path as coordinates on the basis.
    pub fn reduce_path(&self, p: &Path) -> Elem {
        if p.len() >= self.bound {
            return Vec::new();
        }
        let col = self
            .table_paths
            .id(p)
            .expect("path fits below the nilpotency bound");
        let reduced = self.reducer.reduce(SVec::singleton(col, self.field.one()));
        let mut out: Elem = reduced
            .entries
            .iter()
            .map(|(c, s)| (self.path_to_basis[self.table_paths.path(*c)], s.clone()))
            .collect();
        out.sort_by_key(|(b, _)| *b);
        out
    }

    pub fn multiply_basis(&self, i: usize, j: usize) -> &Elem {
        &self.table[i][j]
    }

    /// Product of two normal-form elements.
    pub fn multiply(&self, x: &Elem, y: &Elem) -> Elem {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                for (k, c) in self.multiply_basis(*i, *j) {
                    let add = a.mul(b).mul(c);
                    let cur = acc.remove(k).unwrap_or_else(|| self.field.zero());
                    let v = cur.add(&add);
                    if !v.is_zero() {
                        acc.insert(*k, v);
                    }
                }
            }
        }
        acc.into_iter().collect()
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        let mut acc: BTreeMap<usize, Scalar> = x.iter().cloned().collect();
        for (j, b) in y {
            let cur = acc.remove(j).unwrap_or_else(|| self.field.zero());
            let v = cur.add(b);
            if !v.is_zero() {
                acc.insert(*j, v);
            }
        }
        acc.into_iter().collect()
    }

    pub fn scale(&self, x: &Elem, s: &Scalar) -> Elem {
        if s.is_zero() {
            return Vec::new();
        }
        x.iter().map(|(i, a)| (*i, a.mul(s))).collect()
    }

    /// Dimension vector of the right projective at `i` (row `i` of the
    /// Cartan matrix).
    pub fn projective_dim_vector(&self, i: VIdx) -> Vec<usize> {
        (0..self.quiver.vertex_count())
            .map(|b| self.pair_basis(i, b).len())
            .collect()
    }

    pub fn display_elem(&self, e: &Elem) -> String {
        if e.is_empty() {
            return "0".into();
        }
        e.iter()
            .map(|(i, c)| {
                let p = self.basis_paths[*i].display(&self.quiver);
                if c.is_one() {
                    p
                } else {
                    format!("{c}*{p}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Cartan matrix: entry (a, b) is the dimension of the (a, b) basis block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    pub vertex_names: Vec<String>,
    pub entries: Vec<Vec<usize>>,
}

impl CartanMatrix {
    pub fn is_symmetric(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

pub fn cartan_matrix(basis: &AlgebraBasis) -> CartanMatrix {
    let n = basis.quiver.vertex_count();
    CartanMatrix {
        vertex_names: basis.quiver.vertex_names().map(|s| s.to_string()).collect(),
        entries: (0..n)
            .map(|a| (0..n).map(|b| basis.pair_basis(a, b).len()).collect())
            .collect(),
    }
}

/// Per-relation minimality verdict: a generator is redundant iff it lies in
/// the span of the others plus (radical * ideal + ideal * radical), decided
/// by exact elimination on the degree-bounded path space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityVerdict {
    pub relation: String,
    pub redundant: bool,
}

pub fn minimality_check(
    pres: &Presentation,
    basis: &AlgebraBasis,
) -> Result<Vec<MinimalityVerdict>, AlgebraError> {
    let field = basis.field;
    let quiver = &pres.quiver;
    // Truncation above max(m, longest term) is harmless here: the dropped
    // tails lie in R^(m+1), which is inside radical*ideal already.
    let work_len = pres.bound.max(pres.max_term_len());
    let table = PathTable::build(quiver, work_len);
    let mut rel_vecs = Vec::new();
    for r in &pres.relations {
        rel_vecs.push(
            relation_vector(r, &table, field, true)?
                .expect("truncating relation vector always exists"),
        );
    }
    // radical multiples of every generator, closed under multiplication
    let mut radical_gens = Vec::new();
    for v in &rel_vecs {
        for arrow in 0..quiver.arrow_count() {
            for side in [Side::Left, Side::Right] {
                if let Some(p) = multiply_row(quiver, &table, v, arrow, side, true) {
                    radical_gens.push(p);
                }
            }
        }
    }
    let radical_space = ideal_closure(quiver, &table, radical_gens, true);
    let mut out = Vec::new();
    for (k, r) in pres.relations.iter().enumerate() {
        let mut space = radical_space.clone();
        for (j, v) in rel_vecs.iter().enumerate() {
            if j != k {
                space.insert(v.clone());
            }
        }
        out.push(MinimalityVerdict {
            relation: r.name.clone(),
            redundant: space.contains(rel_vecs[k].clone()),
        });
    }
    Ok(out)
}

/// Radical filtration and right socles of the projectives.
#[derive(Clone, Debug)]
pub struct RadicalReport {
    /// Dimensions of J^0 = algebra, J^1, J^2, ... down to zero.
    pub power_dims: Vec<usize>,
    /// Right socle of each projective e_i Lambda: basis elements expressed
    /// in normal form, plus the vertex the socle lives over when it is
    /// concentrated in a single block.
    pub socles: Vec<SocleInfo>,
}

#[derive(Clone, Debug)]
pub struct SocleInfo {
    pub vertex: VIdx,
    pub dim: usize,
    pub generators: Vec<Elem>,
    pub concentrated_at: Option<VIdx>,
}

pub fn socle_and_radical(basis: &AlgebraBasis) -> RadicalReport {
    let field = basis.field;
    let n = basis.dim();
    // J^1 is spanned by the positive-length standard monomials; higher
    // powers are closed by multiplying with arrows on the right.
    let mut power_dims = vec![n];
    let mut current: Vec<Elem> = (0..n)
        .filter(|&i| !basis.basis_paths[i].is_empty())
        .map(|i| vec![(i, field.one())])
        .collect();
    let arrows: Vec<Elem> = (0..basis.quiver.arrow_count())
        .map(|a| {
            let p = Path::of_arrow(&basis.quiver, a);
            vec![(
                basis.basis_index_of(&p).expect("arrows are basis elements"),
                field.one(),
            )]
        })
        .collect();
    loop {
        let mut span = RowSpace::new();
        let mut reduced: Vec<Elem> = Vec::new();
        for e in &current {
            let mut v = SVec::new();
            for (i, c) in e {
                v.push(*i, c.clone());
            }
            if let Some(r) = span.insert(v) {
                reduced.push(r.entries.iter().map(|(c, s)| (*c, s.clone())).collect());
            }
        }
        power_dims.push(span.rank());
        if span.rank() == 0 {
            break;
        }
        let mut next = Vec::new();
        for e in &reduced {
            for a in &arrows {
                let prod = basis.multiply(e, a);
                if !prod.is_empty() {
                    next.push(prod);
                }
            }
        }
        current = next;
    }

    let socles = (0..basis.quiver.vertex_count())
        .map(|v| socle_of_projective(basis, v))
        .collect();
    RadicalReport { power_dims, socles }
}

fn socle_of_projective(basis: &AlgebraBasis, v: VIdx) -> SocleInfo {
    use crate::linalg::Mat;
    let field = basis.field;
    let rows: Vec<usize> = (0..basis.quiver.vertex_count())
        .flat_map(|b| basis.pair_basis(v, b).iter().copied())
        .collect();
    let n = basis.dim();
    let arrows: Vec<usize> = (0..basis.quiver.arrow_count()).collect();
    // matrix of the right-multiplication by all arrows, stacked columnwise
    let mut m = Mat::zero(rows.len(), arrows.len() * n, field);
    for (ri, &e) in rows.iter().enumerate() {
        for (ai, &a) in arrows.iter().enumerate() {
            let p = Path::of_arrow(&basis.quiver, a);
            let aj = basis.basis_index_of(&p).unwrap();
            for (k, c) in basis.multiply_basis(e, aj) {
                *m.at_mut(ri, ai * n + k) = c.clone();
            }
        }
    }
    let ker = m.left_nullspace();
    let mut generators = Vec::new();
    let mut targets: BTreeSet<VIdx> = BTreeSet::new();
    for r in 0..ker.rows {
        let mut e: Elem = Vec::new();
        for (ri, &bidx) in rows.iter().enumerate() {
            let c = ker.at(r, ri).clone();
            if !c.is_zero() {
                e.push((bidx, c));
                targets.insert(basis.basis_pair(bidx).1);
            }
        }
        generators.push(e);
    }
    let concentrated_at = if targets.len() == 1 {
        targets.into_iter().next()
    } else {
        None
    };
    SocleInfo {
        vertex: v,
        dim: ker.rows,
        generators,
        concentrated_at,
    }
}

/// Necessary conditions for the algebra to be symmetric. A pass is evidence,
/// not a proof of symmetry; failures are disproofs.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub cartan_symmetric: bool,
    /// Per vertex: socle of the projective is 1-dimensional.
    pub socle_simple: Vec<(VIdx, bool)>,
    /// Per vertex: that socle is concentrated over the same vertex, i.e.
    /// soc(e_i Lambda) is isomorphic to S_i.
    pub socle_matches: Vec<(VIdx, bool)>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.cartan_symmetric
            && self.socle_simple.iter().all(|(_, ok)| *ok)
            && self.socle_matches.iter().all(|(_, ok)| *ok)
    }
}

pub fn symmetry_diagnostics(basis: &AlgebraBasis) -> SymmetryReport {
    let cartan = cartan_matrix(basis);
    let rad = socle_and_radical(basis);
    let socle_simple = rad.socles.iter().map(|s| (s.vertex, s.dim == 1)).collect();
    let socle_matches = rad
        .socles
        .iter()
        .map(|s| (s.vertex, s.dim == 1 && s.concentrated_at == Some(s.vertex)))
        .collect();
    SymmetryReport {
        cartan_symmetric: cartan.is_symmetric(),
        socle_simple,
        socle_matches,
    }
}

/// The idempotent algebra e Lambda e for a vertex subset, returned as its
/// basis, Gabriel quiver arrow counts and the restricted multiplication
/// table (minimal relations are not recovered).
#[derive(Clone, Debug)]
pub struct IdempotentAlgebra {
    pub vertices: Vec<VIdx>,
    /// Global basis indices of the elements spanning e Lambda e.
    pub basis: Vec<usize>,
    pub dim: usize,
    /// Arrow counts of the Gabriel quiver of e Lambda e, keyed by (source,
    /// target) vertices: dim of eJe / (eJe)^2 in that block.
    pub gabriel_arrows: BTreeMap<(VIdx, VIdx), usize>,
}

pub fn idempotent_algebra(basis: &AlgebraBasis, vertices: &BTreeSet<VIdx>) -> IdempotentAlgebra {
    assert!(!vertices.is_empty(), "vertex subset must be nonempty");
    let verts: Vec<VIdx> = vertices.iter().copied().collect();
    let mut local: Vec<usize> = Vec::new();
    for &a in &verts {
        for &b in &verts {
            local.extend(basis.pair_basis(a, b));
        }
    }
    local.sort_unstable();

    // eJe is spanned by the positive-length basis elements with endpoints in
    // the subset; its square is spanned by their pairwise products.
    let radical: Vec<usize> = local
        .iter()
        .copied()
        .filter(|&i| !basis.basis_paths[i].is_empty())
        .collect();
    let mut square = RowSpace::new();
    for &i in &radical {
        for &j in &radical {
            let prod = basis.multiply_basis(i, j);
            let mut v = SVec::new();
            for (k, c) in prod {
                v.push(*k, c.clone());
            }
            square.insert(v);
        }
    }
    let mut gabriel_arrows = BTreeMap::new();
    for &a in &verts {
        for &b in &verts {
            let rad_ab = radical
                .iter()
                .filter(|&&i| basis.basis_pair(i) == (a, b))
                .count();
            // the square is spanned by class-homogeneous rows over basis
            // coordinates, so the block dimension is the number of its
            // pivots within this block
            let sq_ab = square
                .pivots()
                .filter(|&p| basis.basis_pair(p) == (a, b))
                .count();
            if rad_ab > sq_ab {
                gabriel_arrows.insert((a, b), rad_ab - sq_ab);
            }
        }
    }
    IdempotentAlgebra {
        vertices: verts,
        dim: local.len(),
        basis: local,
        gabriel_arrows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn loop_x2() -> Presentation {
        let q = Quiver::build(&["v"], &[("x", "v", "v")]).unwrap();
        let r = Relation::of_paths(&q, "r", &[(1, &["x", "x"])]).unwrap();
        Presentation::new(q, vec![r], 2).unwrap()
    }

    fn two_cycle_len3() -> Presentation {
        let q = Quiver::build(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        let r1 = Relation::of_paths(&q, "r1", &[(1, &["a", "b", "a"])]).unwrap();
        let r2 = Relation::of_paths(&q, "r2", &[(1, &["b", "a", "b"])]).unwrap();
        Presentation::new(q, vec![r1, r2], 3).unwrap()
    }

    fn quaternion_local() -> Presentation {
        let q = Quiver::build(&["v"], &[("x", "v", "v"), ("y", "v", "v")]).unwrap();
        let r1 = Relation::of_paths(&q, "r1", &[(1, &["x", "x"]), (-1, &["y", "x", "y"])]).unwrap();
        let r2 = Relation::of_paths(&q, "r2", &[(1, &["y", "y"]), (-1, &["x", "y", "x"])]).unwrap();
        let r3 = Relation::of_paths(&q, "r3", &[(1, &["x", "x", "y"])]).unwrap();
        let r4 = Relation::of_paths(&q, "r4", &[(1, &["y", "x", "x"])]).unwrap();
        Presentation::new(q, vec![r1, r2, r3, r4], 5).unwrap()
    }

    #[test]
    fn loop_basis() {
        let b = compute_basis(&loop_x2(), FieldSpec::Rational).unwrap();
        assert_eq!(b.dim(), 2);
        let c = cartan_matrix(&b);
        assert_eq!(c.entries, vec![vec![2]]);
    }

    #[test]
    fn two_cycle_basis_and_cartan() {
        let b = compute_basis(&two_cycle_len3(), FieldSpec::Rational).unwrap();
        assert_eq!(b.dim(), 6);
        let shown: Vec<String> = b.basis_paths.iter().map(|p| p.display(&b.quiver)).collect();
        assert_eq!(shown, vec!["e(1)", "e(2)", "a", "b", "a.b", "b.a"]);
        let c = cartan_matrix(&b);
        assert_eq!(c.entries, vec![vec![2, 1], vec![1, 2]]);
        assert!(c.is_symmetric());
    }

    #[test]
    fn quaternion_dim_8() {
        let b = compute_basis(&quaternion_local(), FieldSpec::Rational).unwrap();
        assert_eq!(b.dim(), 8);
        assert_eq!(cartan_matrix(&b).entries, vec![vec![8]]);
    }

    #[test]
    fn quaternion_over_prime_field() {
        let b = compute_basis(&quaternion_local(), FieldSpec::prime(7).unwrap()).unwrap();
        assert_eq!(b.dim(), 8);
    }

    #[test]
    fn truncated_a2_has_no_length_two_paths() {
        // no relations: admissible because the quiver has no path of length 2
        let q = Quiver::build(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let pres = Presentation::new(q, vec![], 2).unwrap();
        let b = compute_basis(&pres, FieldSpec::Rational).unwrap();
        assert_eq!(b.dim(), 3);
    }

    #[test]
    fn non_admissible_is_rejected() {
        // x^2 = x^3 does not define an admissible quotient: x^2 never joins
        // the ideal, whatever the claimed bound
        let q = Quiver::build(&["v"], &[("x", "v", "v")]).unwrap();
        let r = Relation::of_paths(&q, "r", &[(1, &["x", "x"]), (-1, &["x", "x", "x"])]).unwrap();
        let pres = Presentation::new(q, vec![r], 4).unwrap();
        match compute_basis(&pres, FieldSpec::Rational) {
            Err(AlgebraError::NotFiniteDimensional { .. }) => {}
            other => panic!(
                "expected NotFiniteDimensional, got {:?}",
                other.map(|b| b.dim())
            ),
        }
    }

    #[test]
    fn precedes_is_syntactic() {
        let pres = quaternion_local();
        let q = &pres.quiver;
        let x = q.arrow_by_name("x").unwrap();
        let y = q.arrow_by_name("y").unwrap();
        let v = q.vertex("v").unwrap();
        let xx = Path::new(q, v, vec![x, x]).unwrap();
        let xy = Path::new(q, v, vec![x, y]).unwrap();
        let yxy = Path::new(q, v, vec![y, x, y]).unwrap();
        assert!(pres.path_precedes(&xx));
        assert!(pres.path_precedes(&yxy));
        assert!(!pres.path_precedes(&xy));
    }

    #[test]
    fn minimality_detects_redundant_power() {
        let q = Quiver::build(&["v"], &[("x", "v", "v")]).unwrap();
        let r1 = Relation::of_paths(&q, "r1", &[(1, &["x", "x"])]).unwrap();
        let r2 = Relation::of_paths(&q, "r2", &[(1, &["x", "x", "x"])]).unwrap();
        let pres = Presentation::new(q, vec![r1, r2], 2).unwrap();
        let b = compute_basis(&pres, FieldSpec::Rational).unwrap();
        let verdicts = minimality_check(&pres, &b).unwrap();
        assert!(!verdicts[0].redundant);
        assert!(verdicts[1].redundant);
    }

    #[test]
    fn minimality_keeps_two_cycle_relations() {
        let pres = two_cycle_len3();
        let b = compute_basis(&pres, FieldSpec::Rational).unwrap();
        let verdicts = minimality_check(&pres, &b).unwrap();
        assert!(verdicts.iter().all(|v| !v.redundant));
    }

    #[test]
    fn socle_of_loop_algebra() {
        let b = compute_basis(&loop_x2(), FieldSpec::Rational).unwrap();
        let rad = socle_and_radical(&b);
        assert_eq!(rad.power_dims, vec![2, 1, 0]);
        assert_eq!(rad.socles[0].dim, 1);
        assert_eq!(rad.socles[0].concentrated_at, Some(0));
    }

    #[test]
    fn socles_of_two_cycle() {
        let b = compute_basis(&two_cycle_len3(), FieldSpec::Rational).unwrap();
        let rad = socle_and_radical(&b);
        // soc P_1 = span{a.b}, soc P_2 = span{b.a}
        for s in &rad.socles {
            assert_eq!(s.dim, 1);
            assert_eq!(s.concentrated_at, Some(s.vertex));
            let (_, c) = &s.generators[0][0];
            assert!(c.is_one());
        }
        let p1_gen = &rad.socles[0].generators[0];
        assert_eq!(b.display_elem(p1_gen), "a.b");
    }

    #[test]
    fn quaternion_socle_one_dimensional() {
        let b = compute_basis(&quaternion_local(), FieldSpec::Rational).unwrap();
        let rad = socle_and_radical(&b);
        assert_eq!(rad.socles[0].dim, 1);
        assert_eq!(rad.power_dims.last(), Some(&0));
        assert!(symmetry_diagnostics(&b).passed());
    }

    #[test]
    fn truncated_a2_fails_symmetry() {
        let q = Quiver::build(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let pres = Presentation::new(q, vec![], 2).unwrap();
        let b = compute_basis(&pres, FieldSpec::Rational).unwrap();
        let rep = symmetry_diagnostics(&b);
        assert!(!rep.passed());
        assert!(!rep.socle_matches[0].1); // soc P_1 = S_2
    }

    #[test]
    fn idempotent_three_cycle() {
        // 3-cycle with all length-4 paths zero, cut down to vertices {1, 2}
        let q = Quiver::build(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")],
        )
        .unwrap();
        let rels = vec![
            Relation::of_paths(&q, "r1", &[(1, &["a", "b", "c", "a"])]).unwrap(),
            Relation::of_paths(&q, "r2", &[(1, &["b", "c", "a", "b"])]).unwrap(),
            Relation::of_paths(&q, "r3", &[(1, &["c", "a", "b", "c"])]).unwrap(),
        ];
        let pres = Presentation::new(q, rels, 4).unwrap();
        let b = compute_basis(&pres, FieldSpec::Rational).unwrap();
        let verts = BTreeSet::from([0usize, 1usize]);
        let idem = idempotent_algebra(&b, &verts);
        assert_eq!(idem.dim, 6);
        // Gabriel quiver of the cut algebra is a 2-cycle
        assert_eq!(idem.gabriel_arrows.get(&(0, 1)), Some(&1));
        assert_eq!(idem.gabriel_arrows.get(&(1, 0)), Some(&1));
        assert_eq!(idem.gabriel_arrows.get(&(0, 0)), None);
        // the induced length-4 word a * bc * a vanishes
        let a = b
            .basis_index_of(&Path::new(&b.quiver, 0, vec![0]).unwrap())
            .unwrap();
        let bc = b
            .basis_index_of(&Path::new(&b.quiver, 1, vec![1, 2]).unwrap())
            .unwrap();
        let one = b.field.one();
        let prod = b.multiply(
            &b.multiply(&vec![(a, one.clone())], &vec![(bc, one.clone())]),
            &vec![(a, one)],
        );
        assert!(prod.is_empty());
    }

    #[test]
    fn idempotent_full_subset_is_whole_algebra() {
        let pres = two_cycle_len3();
        let b = compute_basis(&pres, FieldSpec::Rational).unwrap();
        let idem = idempotent_algebra(&b, &BTreeSet::from([0usize, 1usize]));
        assert_eq!(idem.dim, b.dim());
    }

    #[test]
    fn associativity_on_random_triples() {
        let b = compute_basis(&quaternion_local(), FieldSpec::Rational).unwrap();
        let n = b.dim();
        let mut g = crate::rng::SplitMix64::new(42);
        for _ in 0..1000 {
            let i = g.below(n as u64) as usize;
            let j = g.below(n as u64) as usize;
            let k = g.below(n as u64) as usize;
            let one = b.field.one();
            let (u, v, w) = (
                vec![(i, one.clone())],
                vec![(j, one.clone())],
                vec![(k, one)],
            );
            let left = b.multiply(&b.multiply(&u, &v), &w);
            let right = b.multiply(&u, &b.multiply(&v, &w));
            assert_eq!(left, right);
        }
    }

    #[test]
    fn cartan_row_sums_are_projective_dims() {
        let b = compute_basis(&two_cycle_len3(), FieldSpec::Rational).unwrap();
        let c = cartan_matrix(&b);
        for a in 0..2 {
            let row: usize = c.entries[a].iter().sum();
            let pdim: usize = b.projective_dim_vector(a).iter().sum();
            assert_eq!(row, pdim);
        }
    }

    #[test]
    fn relation_validation_errors() {
        let q = Quiver::build(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        // non-parallel
        assert!(Relation::of_paths(&q, "bad", &[(1, &["a", "b"]), (1, &["b", "a"])]).is_err());
        // short path
        assert!(Relation::of_paths(&q, "short", &[(1, &["a"])]).is_err());
    }
}
