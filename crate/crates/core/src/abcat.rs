//! Finite-length abelian categories presented as representations of a
//! finite quiver (possibly with loops subject to relations).
//!
//! All three backend families share one carrier: an object assigns a vector
//! space `k^{d_v}` to every vertex and a matrix to every arrow, and a
//! morphism is one matrix per vertex commuting with every arrow.
//!
//! * path algebras of acyclic quivers: vertices and arrows of the quiver;
//! * group algebras of finite abelian groups `Z_{m_1} x ... x Z_{m_r}` with
//!   `|G|` invertible: one vertex, one loop per cyclic generator, relations
//!   `g_i^{m_i} = 1` and `g_i g_j = g_j g_i`;
//! * `⊕_b Mat_{n_b}(Vec)`: one vertex per cell `(b, i, j)` and no arrows.
//!
//! Every simple object in these presets is one-dimensional, which is what
//! lets [`identify_simple`] read off a label from a single vertex and its
//! loop scalars.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{self, canonical_span, kernel_basis, quotient_coords, Mat};
use crate::field::{Field, FieldElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    PathAlgebra,
    GroupAlgebra,
    Matvec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Presentation {
    /// Acyclic quiver on `vertices` vertices; arrows are `(source, target)`.
    Path {
        vertices: usize,
        arrows: Vec<(usize, usize)>,
    },
    /// Abelian group `Z_{m_1} x ... x Z_{m_r}`.
    Group { orders: Vec<u64> },
    /// `⊕_b Mat_{n_b}(Vec)`.
    Matvec { blocks: Vec<usize> },
}

/// A simple object of the inventory: one-dimensional at `vertex`, with the
/// given scalar on every loop at that vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleSpec {
    pub label: String,
    pub vertex: usize,
    #[serde(skip)]
    pub loops: Vec<(usize, FieldElem)>,
}

#[derive(Debug, PartialEq, Eq)]
struct BackendData {
    name: String,
    field: Field,
    presentation: Presentation,
    vertex_labels: Vec<String>,
    arrows: Vec<(usize, usize)>,
    simples: Vec<SimpleSpec>,
}

/// Shared handle to a backend presentation.
#[derive(Clone)]
pub struct Backend(Arc<BackendData>);

impl PartialEq for Backend {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Backend {}

impl fmt::Debug for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Backend({})", self.0.name)
    }
}

impl Backend {
    /// Path algebra of an acyclic quiver on vertices `0..vertices`.
    pub fn path_algebra(field: Field, vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Backend> {
        if vertices == 0 {
            return Err(Error::InvalidBackend("quiver has no vertices".into()));
        }
        for &(s, t) in &arrows {
            if s >= vertices || t >= vertices {
                return Err(Error::InvalidBackend(format!("arrow {s}->{t} leaves the quiver")));
            }
        }
        if has_cycle(vertices, &arrows) {
            return Err(Error::InvalidBackend("quiver must be acyclic".into()));
        }
        let simples = (0..vertices)
            .map(|v| SimpleSpec {
                label: format!("S{}", v + 1),
                vertex: v,
                loops: Vec::new(),
            })
            .collect();
        let arrow_desc: Vec<String> = arrows.iter().map(|(s, t)| format!("{}>{}", s + 1, t + 1)).collect();
        Ok(Backend(Arc::new(BackendData {
            name: format!("path[{vertices};{}]/{field}", arrow_desc.join(",")),
            field,
            presentation: Presentation::Path {
                vertices,
                arrows: arrows.clone(),
            },
            vertex_labels: (1..=vertices).map(|v| v.to_string()).collect(),
            arrows,
            simples,
        })))
    }

    /// Group algebra of `Z_{m_1} x ... x Z_{m_r}`. The field must contain the
    /// needed roots of unity and have characteristic prime to `|G|`.
    /// `labels`, when given, names the characters in exponent order.
    pub fn group_algebra(field: Field, orders: Vec<u64>, labels: Option<Vec<String>>) -> Result<Backend> {
        if orders.is_empty() || orders.iter().any(|&m| m < 1) {
            return Err(Error::InvalidBackend("group needs at least one cyclic factor of order >= 1".into()));
        }
        let group_order: u64 = orders.iter().product();
        let ch = field.characteristic();
        if ch != 0 && group_order % ch == 0 {
            return Err(Error::InvalidBackend(format!(
                "characteristic {ch} divides the group order {group_order}"
            )));
        }
        let roots: Vec<FieldElem> = orders
            .iter()
            .map(|&m| {
                field.root_of_unity(m).ok_or_else(|| {
                    Error::InvalidBackend(format!("{field} has no primitive {m}-th root of unity"))
                })
            })
            .collect::<Result<_>>()?;
        let mut exponents: Vec<Vec<u64>> = vec![Vec::new()];
        for &m in &orders {
            exponents = exponents
                .into_iter()
                .flat_map(|e| {
                    (0..m).map(move |a| {
                        let mut e = e.clone();
                        e.push(a);
                        e
                    })
                })
                .collect();
        }
        if let Some(l) = &labels {
            if l.len() != exponents.len() {
                return Err(Error::InvalidBackend(format!(
                    "{} character labels given for {} characters",
                    l.len(),
                    exponents.len()
                )));
            }
        }
        let simples = exponents
            .iter()
            .enumerate()
            .map(|(k, e)| SimpleSpec {
                label: labels.as_ref().map_or_else(
                    || format!("chi({})", e.iter().map(u64::to_string).collect::<Vec<_>>().join(",")),
                    |l| l[k].clone(),
                ),
                vertex: 0,
                loops: e.iter().enumerate().map(|(i, &a)| (i, roots[i].pow(a))).collect(),
            })
            .collect();
        let desc: Vec<String> = orders.iter().map(u64::to_string).collect();
        Ok(Backend(Arc::new(BackendData {
            name: format!("group[{}]/{field}", desc.join(",")),
            field,
            presentation: Presentation::Group { orders: orders.clone() },
            vertex_labels: vec!["*".into()],
            arrows: vec![(0, 0); orders.len()],
            simples,
        })))
    }

    /// `⊕_b Mat_{n_b}(Vec)` with cell simples `E_{ij}` per block. An empty block
    /// list gives the zero category.
    pub fn matvec(field: Field, blocks: Vec<usize>) -> Result<Backend> {
        if blocks.iter().any(|&n| n == 0) {
            return Err(Error::InvalidBackend("matvec blocks must have size >= 1".into()));
        }
        let mut simples = Vec::new();
        let mut vertex_labels = Vec::new();
        for (b, &n) in blocks.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let label = if n < 10 {
                        format!("E{}_{}{}", b + 1, i + 1, j + 1)
                    } else {
                        format!("E{}_{},{}", b + 1, i + 1, j + 1)
                    };
                    simples.push(SimpleSpec {
                        label: label.clone(),
                        vertex: vertex_labels.len(),
                        loops: Vec::new(),
                    });
                    vertex_labels.push(label);
                }
            }
        }
        let desc: Vec<String> = blocks.iter().map(usize::to_string).collect();
        Ok(Backend(Arc::new(BackendData {
            name: format!("matvec[{}]/{field}", desc.join(",")),
            field,
            presentation: Presentation::Matvec { blocks },
            vertex_labels,
            arrows: Vec::new(),
            simples,
        })))
    }

    /// Rep(kZ₂) over Q with `W1 = k(1-g)` (sign) and `W2 = k(1+g)` (trivial).
    pub fn repz2() -> Backend {
        Backend::group_algebra(Field::Rational, vec![2], Some(vec!["W2".into(), "W1".into()]))
            .expect("Q contains -1")
    }

    /// The A₂ quiver `1 -> 2`.
    pub fn path_a2(field: Field) -> Backend {
        Backend::path_algebra(field, 2, vec![(0, 1)]).expect("A2 is acyclic")
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    pub fn kind(&self) -> BackendKind {
        match self.0.presentation {
            Presentation::Path { .. } => BackendKind::PathAlgebra,
            Presentation::Group { .. } => BackendKind::GroupAlgebra,
            Presentation::Matvec { .. } => BackendKind::Matvec,
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.0.presentation
    }

    pub fn vertex_count(&self) -> usize {
        self.0.vertex_labels.len()
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.0.vertex_labels
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.0.arrows
    }

    pub fn simples(&self) -> &[SimpleSpec] {
        &self.0.simples
    }

    pub fn simple_count(&self) -> usize {
        self.0.simples.len()
    }

    pub fn simple_label(&self, idx: usize) -> &str {
        &self.0.simples[idx].label
    }

    pub fn simple_index(&self, label: &str) -> Result<usize> {
        self.0
            .simples
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// The simple object with inventory index `idx`.
    pub fn simple(&self, idx: usize) -> Obj {
        let spec = &self.0.simples[idx];
        let mut dims = vec![0; self.vertex_count()];
        dims[spec.vertex] = 1;
        let field = self.field();
        let actions = self
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let mut m = Mat::zeros(field, dims[t], dims[s]);
                if s == spec.vertex && t == spec.vertex {
                    let scalar = spec
                        .loops
                        .iter()
                        .find(|(arrow, _)| *arrow == a)
                        .map(|(_, x)| x.clone())
                        .unwrap_or_else(|| field.zero());
                    m.set(0, 0, scalar);
                }
                m
            })
            .collect();
        Obj {
            backend: self.clone(),
            dims,
            actions,
        }
    }

    pub fn tensor_capable(&self) -> bool {
        !matches!(self.0.presentation, Presentation::Path { .. })
    }

    /// Matvec block sizes, if this is a matvec backend.
    pub fn matvec_blocks(&self) -> Option<&[usize]> {
        match &self.0.presentation {
            Presentation::Matvec { blocks } => Some(blocks),
            _ => None,
        }
    }

    /// Vertex index of cell `(block, i, j)` in a matvec backend.
    pub fn matvec_vertex(&self, block: usize, i: usize, j: usize) -> usize {
        let blocks = self.matvec_blocks().expect("matvec backend");
        let offset: usize = blocks[..block].iter().map(|n| n * n).sum();
        offset + i * blocks[block] + j
    }

    fn check_same(&self, other: &Backend) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BackendMismatch(self.name().into(), other.name().into()))
        }
    }
}

fn has_cycle(n: usize, arrows: &[(usize, usize)]) -> bool {
    // Kahn's algorithm
    let mut indeg = vec![0usize; n];
    for &(_, t) in arrows {
        indeg[t] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &(s, t) in arrows {
            if s == v {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
    }
    seen < n
}

/// An object: a vector space per vertex and a matrix per arrow.
#[derive(Clone, PartialEq, Eq)]
pub struct Obj {
    backend: Backend,
    dims: Vec<usize>,
    actions: Vec<Mat>,
}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Obj")
            .field("backend", &self.backend.name())
            .field("dims", &self.dims)
            .field("actions", &self.actions)
            .finish()
    }
}

impl Obj {
    /// Validates shapes and the backend's defining relations.
    pub fn new(backend: &Backend, dims: Vec<usize>, actions: Vec<Mat>) -> Result<Obj> {
        if dims.len() != backend.vertex_count() {
            return Err(Error::InvalidObject(format!(
                "{} vertex dimensions given, backend has {} vertices",
                dims.len(),
                backend.vertex_count()
            )));
        }
        if actions.len() != backend.arrows().len() {
            return Err(Error::InvalidObject(format!(
                "{} action matrices given, backend has {} arrows",
                actions.len(),
                backend.arrows().len()
            )));
        }
        for (a, (&(s, t), m)) in backend.arrows().iter().zip(&actions).enumerate() {
            if m.field() != backend.field() {
                return Err(Error::InvalidObject(format!("arrow {a} matrix over {}", m.field())));
            }
            if m.shape() != (dims[t], dims[s]) {
                return Err(Error::InvalidObject(format!(
                    "arrow {a} matrix has shape {:?}, expected {:?}",
                    m.shape(),
                    (dims[t], dims[s])
                )));
            }
        }
        if let Presentation::Group { orders } = backend.presentation() {
            let d = dims[0];
            let id = Mat::identity(backend.field(), d);
            for (i, &m) in orders.iter().enumerate() {
                let mut p = id.clone();
                for _ in 0..m {
                    p = p.mul(&actions[i])?;
                }
                if p != id {
                    return Err(Error::InvalidObject(format!("generator g{} does not satisfy g^{m} = 1", i + 1)));
                }
                for j in i + 1..orders.len() {
                    if actions[i].mul(&actions[j])? != actions[j].mul(&actions[i])? {
                        return Err(Error::InvalidObject(format!("g{} and g{} do not commute", i + 1, j + 1)));
                    }
                }
            }
        }
        Ok(Obj {
            backend: backend.clone(),
            dims,
            actions,
        })
    }

    /// For constructions that satisfy the relations by design (tensor
    /// products, duals). Shapes are still checked in debug builds.
    pub(crate) fn trusted(backend: &Backend, dims: Vec<usize>, actions: Vec<Mat>) -> Obj {
        debug_assert!(backend
            .arrows()
            .iter()
            .zip(&actions)
            .all(|(&(s, t), m)| m.shape() == (dims[t], dims[s])));
        Obj {
            backend: backend.clone(),
            dims,
            actions,
        }
    }

    pub fn zero(backend: &Backend) -> Obj {
        let dims = vec![0; backend.vertex_count()];
        let actions = backend
            .arrows()
            .iter()
            .map(|_| Mat::zeros(backend.field(), 0, 0))
            .collect();
        Obj {
            backend: backend.clone(),
            dims,
            actions,
        }
    }

    /// Matvec object from its cell dimensions, one `n_b x n_b` grid per block.
    pub fn matvec_grid(backend: &Backend, grids: &[Vec<Vec<usize>>]) -> Result<Obj> {
        let blocks = backend
            .matvec_blocks()
            .ok_or_else(|| Error::InvalidObject("grid objects need a matvec backend".into()))?;
        if grids.len() != blocks.len() {
            return Err(Error::InvalidObject(format!(
                "{} grids given for {} blocks",
                grids.len(),
                blocks.len()
            )));
        }
        let mut dims = Vec::with_capacity(backend.vertex_count());
        for (b, (grid, &n)) in grids.iter().zip(blocks).enumerate() {
            if grid.len() != n || grid.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidObject(format!("grid for block {} must be {n}x{n}", b + 1)));
            }
            dims.extend(grid.iter().flatten().copied());
        }
        Obj::new(backend, dims, Vec::new())
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn field(&self) -> Field {
        self.backend.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn actions(&self) -> &[Mat] {
        &self.actions
    }

    pub fn action(&self, arrow: usize) -> &Mat {
        &self.actions[arrow]
    }

    /// Offset of each vertex's block inside the global carrier `⊕_v k^{d_v}`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    /// Matvec cell dimensions `d_{(b,i,j)}` as one grid per block.
    pub fn grid(&self) -> Option<Vec<Vec<Vec<usize>>>> {
        let blocks = self.backend.matvec_blocks()?;
        let mut it = self.dims.iter();
        Some(
            blocks
                .iter()
                .map(|&n| (0..n).map(|_| (0..n).map(|_| *it.next().unwrap()).collect()).collect())
                .collect(),
        )
    }

    pub fn identity(&self) -> Mor {
        Mor {
            source: self.clone(),
            target: self.clone(),
            maps: self.dims.iter().map(|&d| Mat::identity(self.field(), d)).collect(),
        }
    }
}

/// A morphism: one matrix per vertex, intertwining every arrow action.
#[derive(Clone, PartialEq, Eq)]
pub struct Mor {
    source: Obj,
    target: Obj,
    maps: Vec<Mat>,
}

impl fmt::Debug for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mor")
            .field("source_dims", &self.source.dims)
            .field("target_dims", &self.target.dims)
            .field("maps", &self.maps)
            .finish()
    }
}

impl Mor {
    /// Checks shapes and the intertwiner equations `f_t ρ_M(a) = ρ_N(a) f_s`.
    pub fn new(source: &Obj, target: &Obj, maps: Vec<Mat>) -> Result<Mor> {
        source.backend.check_same(&target.backend)?;
        if maps.len() != source.dims.len() {
            return Err(Error::NotIntertwiner("wrong number of vertex maps".into()));
        }
        for (v, m) in maps.iter().enumerate() {
            if m.shape() != (target.dims[v], source.dims[v]) {
                return Err(Error::NotIntertwiner(format!(
                    "vertex {v} map has shape {:?}, expected {:?}",
                    m.shape(),
                    (target.dims[v], source.dims[v])
                )));
            }
            if m.field() != source.field() {
                return Err(Error::NotIntertwiner(format!("vertex {v} map over {}", m.field())));
            }
        }
        let mor = Mor {
            source: source.clone(),
            target: target.clone(),
            maps,
        };
        mor.check_intertwines()?;
        Ok(mor)
    }

    fn check_intertwines(&self) -> Result<()> {
        for (a, &(s, t)) in self.source.backend.arrows().iter().enumerate() {
            let lhs = self.maps[t].mul(self.source.action(a))?;
            let rhs = self.target.action(a).mul(&self.maps[s])?;
            if lhs != rhs {
                return Err(Error::NotIntertwiner(format!("fails to commute with arrow {a}")));
            }
        }
        Ok(())
    }

    /// Internal constructor for maps that intertwine by construction; the
    /// equations are still asserted.
    pub(crate) fn assemble(source: &Obj, target: &Obj, maps: Vec<Mat>) -> Mor {
        match Mor::new(source, target, maps) {
            Ok(m) => m,
            Err(e) => panic!("internal morphism construction failed: {e}"),
        }
    }

    pub fn zero(source: &Obj, target: &Obj) -> Mor {
        let maps = source
            .dims
            .iter()
            .zip(&target.dims)
            .map(|(&s, &t)| Mat::zeros(source.field(), t, s))
            .collect();
        Mor {
            source: source.clone(),
            target: target.clone(),
            maps,
        }
    }

    pub fn source(&self) -> &Obj {
        &self.source
    }

    pub fn target(&self) -> &Obj {
        &self.target
    }

    pub fn maps(&self) -> &[Mat] {
        &self.maps
    }

    pub fn map(&self, v: usize) -> &Mat {
        &self.maps[v]
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Mat::is_zero)
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &Mor) -> Result<Mor> {
        if f.target != self.source {
            return Err(Error::ComposeError("target of the first map is not the source of the second".into()));
        }
        let maps = self
            .maps
            .iter()
            .zip(&f.maps)
            .map(|(g, f)| g.mul(f))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Mor {
            source: f.source.clone(),
            target: self.target.clone(),
            maps,
        })
    }

    fn check_parallel(&self, other: &Mor) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ComposeError("morphisms are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Mor) -> Result<Mor> {
        self.check_parallel(other)?;
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Mor {
            source: self.source.clone(),
            target: self.target.clone(),
            maps,
        })
    }

    pub fn sub(&self, other: &Mor) -> Result<Mor> {
        self.add(&other.scale(&self.field().int(-1)))
    }

    pub fn scale(&self, s: &FieldElem) -> Mor {
        Mor {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().map(|m| m.scale(s)).collect(),
        }
    }

    /// Linear combination `Σ c_k b_k` of parallel morphisms.
    pub fn combination(source: &Obj, target: &Obj, basis: &[Mor], coeffs: &[FieldElem]) -> Result<Mor> {
        let mut acc = Mor::zero(source, target);
        for (b, c) in basis.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c))?;
            }
        }
        Ok(acc)
    }

    pub fn rank(&self) -> usize {
        self.maps.iter().map(Mat::rank).sum()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// All vertex matrices concatenated row-major.
    pub fn flatten(&self) -> Vec<FieldElem> {
        self.maps.iter().flat_map(|m| m.entries().iter().cloned()).collect()
    }
}

/// A subobject: a parent, the sub carrier with induced actions, and the
/// injective inclusion. Vertex bases are kept in canonical (reduced) form so
/// equal subobjects compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubObj {
    parent: Obj,
    obj: Obj,
    inclusion: Mor,
}

impl SubObj {
    /// The subobject whose vertex spaces are spanned by the columns of
    /// `spanning[v]`. Fails with `NotSubobject` unless the span is invariant.
    pub fn from_spanning(parent: &Obj, spanning: Vec<Mat>) -> Result<SubObj> {
        if spanning.len() != parent.dims.len() {
            return Err(Error::NotSubobject("wrong number of vertex spaces".into()));
        }
        let bases: Vec<Mat> = spanning
            .iter()
            .enumerate()
            .map(|(v, m)| {
                if m.rows() != parent.dims[v] {
                    return Err(Error::NotSubobject(format!("vertex {v} vectors have the wrong length")));
                }
                Ok(canonical_span(m))
            })
            .collect::<Result<_>>()?;
        let dims: Vec<usize> = bases.iter().map(Mat::cols).collect();
        let mut actions = Vec::with_capacity(parent.actions.len());
        for (a, &(s, t)) in parent.backend.arrows().iter().enumerate() {
            let image = parent.action(a).mul(&bases[s])?;
            let induced = exactlin::solve(&bases[t], &image)?
                .ok_or_else(|| Error::NotSubobject(format!("span is not invariant under arrow {a}")))?;
            actions.push(induced);
        }
        let obj = Obj {
            backend: parent.backend.clone(),
            dims,
            actions,
        };
        let inclusion = Mor::assemble(&obj, parent, bases);
        Ok(SubObj {
            parent: parent.clone(),
            obj,
            inclusion,
        })
    }

    pub fn zero(parent: &Obj) -> SubObj {
        let spanning = parent.dims.iter().map(|&d| Mat::zeros(parent.field(), d, 0)).collect();
        SubObj::from_spanning(parent, spanning).expect("zero subspace is invariant")
    }

    pub fn whole(parent: &Obj) -> SubObj {
        SubObj {
            parent: parent.clone(),
            obj: parent.clone(),
            inclusion: parent.identity(),
        }
    }

    pub fn parent(&self) -> &Obj {
        &self.parent
    }

    pub fn obj(&self) -> &Obj {
        &self.obj
    }

    pub fn inclusion(&self) -> &Mor {
        &self.inclusion
    }

    pub fn basis(&self, v: usize) -> &Mat {
        self.inclusion.map(v)
    }

    pub fn dim(&self) -> usize {
        self.obj.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_whole(&self) -> bool {
        self.dim() == self.parent.dim()
    }

    fn check_parent(&self, other: &SubObj) -> Result<()> {
        if self.parent != other.parent {
            return Err(Error::NotSubobject("subobjects of different parents".into()));
        }
        Ok(())
    }

    /// `self ⊆ other` as subspaces of the common parent.
    pub fn is_contained_in(&self, other: &SubObj) -> Result<bool> {
        self.check_parent(other)?;
        for v in 0..self.parent.dims.len() {
            if exactlin::solve(other.basis(v), self.basis(v))?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &SubObj) -> Result<SubObj> {
        self.check_parent(other)?;
        let spanning = (0..self.parent.dims.len())
            .map(|v| self.basis(v).hstack(other.basis(v)))
            .collect::<Result<Vec<_>, _>>()?;
        SubObj::from_spanning(&self.parent, spanning)
    }

    pub fn intersect(&self, other: &SubObj) -> Result<SubObj> {
        self.check_parent(other)?;
        let spanning = (0..self.parent.dims.len())
            .map(|v| exactlin::intersect_spans(self.basis(v), other.basis(v)))
            .collect::<Result<Vec<_>, _>>()?;
        SubObj::from_spanning(&self.parent, spanning)
    }

    /// Image of this subobject under `f: parent -> N`, as a subobject of `N`.
    pub fn push_forward(&self, f: &Mor) -> Result<SubObj> {
        if f.source() != &self.parent {
            return Err(Error::NotSubobject("morphism does not start at the parent".into()));
        }
        image(&f.after(&self.inclusion)?)
    }

    /// Preimage `f^{-1}(S)` of a subobject `S` of `f`'s target.
    pub fn pull_back(sub: &SubObj, f: &Mor) -> Result<SubObj> {
        if f.target() != &sub.parent {
            return Err(Error::NotSubobject("morphism does not land in the parent".into()));
        }
        let q = quotient_object(&sub.parent, sub)?;
        kernel(&q.proj.after(f)?)
    }

    /// Expresses each vector of `sub` (a subobject of the same parent
    /// contained in `self`) in this subobject's coordinates, giving the
    /// inclusion `sub -> self`.
    pub fn inclusion_of(&self, sub: &SubObj) -> Result<Mor> {
        self.check_parent(sub)?;
        let maps = (0..self.parent.dims.len())
            .map(|v| {
                exactlin::solve(self.basis(v), sub.basis(v))?
                    .ok_or_else(|| Error::NotSubobject("not contained".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Mor::new(&sub.obj, &self.obj, maps)
    }
}

/// A quotient `M / S` with its projection and a linear (not necessarily
/// equivariant) section given by the complement coordinates.
#[derive(Clone, Debug)]
pub struct QuotientObj {
    pub obj: Obj,
    pub proj: Mor,
    pub section: Vec<Mat>,
}

/// `M / S`, with actions induced on the complement coordinates.
pub fn quotient_object(m: &Obj, s: &SubObj) -> Result<QuotientObj> {
    if &s.parent != m {
        return Err(Error::NotSubobject("subobject belongs to a different object".into()));
    }
    let field = m.field();
    if s.is_zero() {
        return Ok(QuotientObj {
            obj: m.clone(),
            proj: m.identity(),
            section: m.dims.iter().map(|&d| Mat::identity(field, d)).collect(),
        });
    }
    let mut projs = Vec::with_capacity(m.dims.len());
    let mut sections = Vec::with_capacity(m.dims.len());
    for (v, &d) in m.dims.iter().enumerate() {
        let b = s.basis(v);
        projs.push(quotient_coords(d, b)?);
        let comp = exactlin::complement_indices(b);
        let mut sec = Mat::zeros(field, d, comp.len());
        for (k, &e) in comp.iter().enumerate() {
            sec.set(e, k, field.one());
        }
        sections.push(sec);
    }
    let dims: Vec<usize> = projs.iter().map(Mat::rows).collect();
    let actions = m
        .backend
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(src, tgt))| projs[tgt].mul(m.action(a))?.mul(&sections[src]))
        .collect::<Result<Vec<_>, _>>()?;
    let obj = Obj {
        backend: m.backend.clone(),
        dims,
        actions,
    };
    let proj = Mor::assemble(m, &obj, projs);
    Ok(QuotientObj {
        obj,
        proj,
        section: sections,
    })
}

pub fn kernel(f: &Mor) -> Result<SubObj> {
    let spanning = f.maps.iter().map(kernel_basis).collect();
    SubObj::from_spanning(&f.source, spanning)
}

pub fn image(f: &Mor) -> Result<SubObj> {
    let spanning = f.maps.iter().map(exactlin::image_basis).collect();
    SubObj::from_spanning(&f.target, spanning)
}

pub fn cokernel(f: &Mor) -> Result<QuotientObj> {
    quotient_object(&f.target, &image(f)?)
}

/// Basis of `Hom(M, N)`, found as the null space of the linear system of
/// commutation constraints.
pub fn hom_basis(m: &Obj, n: &Obj) -> Result<Vec<Mor>> {
    m.backend.check_same(&n.backend)?;
    let field = m.field();
    let nv = m.dims.len();
    let mut offsets = Vec::with_capacity(nv);
    let mut unknowns = 0;
    for v in 0..nv {
        offsets.push(unknowns);
        unknowns += m.dims[v] * n.dims[v];
    }
    // unknown f_v[r][c] lives at offsets[v] + r * dM_v + c
    let at = |v: usize, r: usize, c: usize| offsets[v] + r * m.dims[v] + c;
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    for (a, &(s, t)) in m.backend.arrows().iter().enumerate() {
        let ma = m.action(a);
        let na = n.action(a);
        for r in 0..n.dims[t] {
            for c in 0..m.dims[s] {
                let mut eq = vec![field.zero(); unknowns];
                for k in 0..m.dims[t] {
                    let x = ma.get(k, c);
                    if !x.is_zero() {
                        let i = at(t, r, k);
                        eq[i] = &eq[i] + x;
                    }
                }
                for k in 0..n.dims[s] {
                    let x = na.get(r, k);
                    if !x.is_zero() {
                        let i = at(s, k, c);
                        eq[i] = &eq[i] - x;
                    }
                }
                if eq.iter().any(|e| !e.is_zero()) {
                    rows.push(eq);
                }
            }
        }
    }
    let system = Mat::from_rows(field, unknowns, rows)?;
    let ker = kernel_basis(&system);
    let mut out = Vec::with_capacity(ker.cols());
    for col in 0..ker.cols() {
        let maps = (0..nv)
            .map(|v| {
                let mut mv = Mat::zeros(field, n.dims[v], m.dims[v]);
                for r in 0..n.dims[v] {
                    for c in 0..m.dims[v] {
                        mv.set(r, c, ker.get(at(v, r, c), col).clone());
                    }
                }
                mv
            })
            .collect();
        out.push(Mor::assemble(m, n, maps));
    }
    Ok(out)
}

/// Smallest subobject of `M` containing the given carrier vectors (columns of
/// `vectors`, in the global coordinates `⊕_v k^{d_v}`): the homogeneous
/// components are closed under every arrow until stable.
pub fn spin_submodule(m: &Obj, vectors: &Mat) -> Result<SubObj> {
    if vectors.rows() != m.dim() {
        return Err(Error::NotSubobject(format!(
            "vectors have length {}, carrier has dimension {}",
            vectors.rows(),
            m.dim()
        )));
    }
    let offsets = m.offsets();
    let mut spans: Vec<Mat> = m
        .dims
        .iter()
        .enumerate()
        .map(|(v, &d)| {
            let idx: Vec<usize> = (offsets[v]..offsets[v] + d).collect();
            canonical_span(&vectors.select_rows(&idx))
        })
        .collect();
    loop {
        let mut changed = false;
        for (a, &(s, t)) in m.backend.arrows().iter().enumerate() {
            let moved = m.action(a).mul(&spans[s])?;
            let grown = canonical_span(&spans[t].hstack(&moved)?);
            if grown.cols() > spans[t].cols() {
                spans[t] = grown;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    SubObj::from_spanning(m, spans)
}

pub fn direct_sum(m: &Obj, n: &Obj) -> Result<Obj> {
    Ok(direct_sum_all(&[m.clone(), n.clone()])?.0)
}

/// `⊕_k X_k` with its canonical injections.
pub fn direct_sum_all(objs: &[Obj]) -> Result<(Obj, Vec<Mor>)> {
    let first = objs
        .first()
        .ok_or_else(|| Error::InvalidObject("empty direct sum needs a backend".into()))?;
    let backend = first.backend.clone();
    for o in objs {
        backend.check_same(&o.backend)?;
    }
    let field = backend.field();
    let nv = backend.vertex_count();
    let dims: Vec<usize> = (0..nv).map(|v| objs.iter().map(|o| o.dims[v]).sum()).collect();
    let actions = (0..backend.arrows().len())
        .map(|a| {
            let blocks: Vec<Mat> = objs.iter().map(|o| o.action(a).clone()).collect();
            Mat::block_diag(field, &blocks)
        })
        .collect();
    let sum = Obj {
        backend: backend.clone(),
        dims,
        actions,
    };
    let mut injections = Vec::with_capacity(objs.len());
    let mut offsets = vec![0usize; nv];
    for o in objs {
        let maps = (0..nv)
            .map(|v| {
                let mut m = Mat::zeros(field, sum.dims[v], o.dims[v]);
                m.put_block(offsets[v], 0, &Mat::identity(field, o.dims[v]));
                m
            })
            .collect();
        injections.push(Mor::assemble(o, &sum, maps));
        for v in 0..nv {
            offsets[v] += o.dims[v];
        }
    }
    Ok((sum, injections))
}

/// Inventory index of a one-dimensional object, read from its vertex and
/// loop scalars.
pub fn identify_simple(x: &Obj) -> Option<usize> {
    if x.dim() != 1 {
        return None;
    }
    let v = x.dims.iter().position(|&d| d == 1)?;
    x.backend.simples().iter().position(|s| {
        s.vertex == v
            && x.backend.arrows().iter().enumerate().all(|(a, &(src, tgt))| {
                if src != v || tgt != v {
                    return true;
                }
                let expected = s
                    .loops
                    .iter()
                    .find(|(arrow, _)| *arrow == a)
                    .map(|(_, e)| e.clone())
                    .unwrap_or_else(|| x.field().zero());
                x.action(a).get(0, 0) == &expected
            })
    })
}

/// One step of a composition series: the simple found and the subobject of
/// the original object reached so far.
#[derive(Clone, Debug)]
pub struct SeriesStep {
    pub simple: usize,
    pub sub: SubObj,
}

/// A composition series `0 ⊂ X_1 ⊂ ... ⊂ X_n = M`, built by repeatedly
/// locating a simple subobject of the current quotient and passing to the
/// next quotient. A simple subobject is the spin of a single vector: the
/// image of the first nonzero map from an inventory simple, tried in
/// `simple_order`.
pub fn composition_series_with(m: &Obj, simple_order: &[usize]) -> Result<Vec<SeriesStep>> {
    let backend = m.backend.clone();
    let mut steps = Vec::new();
    let mut current = SubObj::zero(m);
    while !current.is_whole() {
        let q = quotient_object(m, &current)?;
        let mut found = None;
        for &s in simple_order {
            let simple = backend.simple(s);
            if let Some(f) = hom_basis(&simple, &q.obj)?.into_iter().next() {
                found = Some((s, f));
                break;
            }
        }
        let (s, f) = found.ok_or_else(|| {
            Error::BackendContract("nonzero object has no simple subobject from the inventory".into())
        })?;
        // pull the simple line back to M and add it
        let line = image(&f)?;
        let lifted = line
            .inclusion
            .maps
            .iter()
            .zip(&q.section)
            .map(|(b, sec)| sec.mul(b))
            .collect::<Result<Vec<_>, _>>()?;
        let spanning = (0..m.dims.len())
            .map(|v| current.basis(v).hstack(&lifted[v]))
            .collect::<Result<Vec<_>, _>>()?;
        let next = SubObj::from_spanning(m, spanning)?;
        debug_assert_eq!(next.dim(), current.dim() + 1);
        current = next;
        steps.push(SeriesStep {
            simple: s,
            sub: current.clone(),
        });
    }
    Ok(steps)
}

pub fn composition_series(m: &Obj) -> Result<Vec<SeriesStep>> {
    let order: Vec<usize> = (0..m.backend.simple_count()).collect();
    composition_series_with(m, &order)
}

/// Composition factors as a sorted multiset of inventory indices.
pub fn composition_factors(m: &Obj) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = composition_series(m)?.into_iter().map(|s| s.simple).collect();
    out.sort_unstable();
    Ok(out)
}

/// Composition factors keyed by label with multiplicities.
pub fn factor_counts(m: &Obj) -> Result<BTreeMap<String, usize>> {
    let mut out = BTreeMap::new();
    for s in composition_factors(m)? {
        *out.entry(m.backend.simple_label(s).to_string()).or_insert(0) += 1;
    }
    Ok(out)
}

pub fn length(m: &Obj) -> Result<usize> {
    Ok(composition_factors(m)?.len())
}

/// Searches `Hom(M, N)` for an invertible element: basis elements first,
/// then every coefficient vector over small prime fields, otherwise seeded
/// random combinations.
pub fn find_isomorphism(m: &Obj, n: &Obj) -> Result<Option<Mor>> {
    m.backend.check_same(&n.backend)?;
    if m.dims != n.dims {
        return Ok(None);
    }
    let basis = hom_basis(m, n)?;
    Ok(search_combinations(m, n, &basis, Mor::is_invertible))
}

pub fn is_isomorphic(m: &Obj, n: &Obj) -> Result<bool> {
    Ok(find_isomorphism(m, n)?.is_some())
}

const EXHAUSTIVE_LIMIT: u64 = 4096;
const RANDOM_TRIES: usize = 64;
const GREEDY_RESTARTS: usize = 4;

/// Finds a combination of `basis` satisfying `accept`, trying basis elements,
/// then exhaustive coefficients (small prime fields) or random ones.
/// Coordinate ascent on the rank of a combination of `basis`. Each pass
/// changes one coefficient at a time and keeps a change only if the rank
/// goes up, so it stops after at most `rank` improvements.
fn rank_ascent(source: &Obj, target: &Obj, basis: &[Mor], mut coeffs: Vec<FieldElem>, rng: &mut ChaCha8Rng) -> Mor {
    let field = source.field();
    let values: Vec<FieldElem> = match field.elements() {
        Some(all) if all.len() <= 16 => all,
        _ => (-3..=3).map(|x| field.int(x)).collect(),
    };
    let build = |c: &[FieldElem]| Mor::combination(source, target, basis, c).expect("parallel basis");
    let mut best = build(&coeffs);
    let mut best_rank = best.rank();
    loop {
        let mut improved = false;
        let mut order: Vec<usize> = (0..basis.len()).collect();
        order.shuffle(rng);
        for i in order {
            for v in &values {
                let old = std::mem::replace(&mut coeffs[i], v.clone());
                let cand = build(&coeffs);
                let r = cand.rank();
                if r > best_rank {
                    best = cand;
                    best_rank = r;
                    improved = true;
                } else {
                    coeffs[i] = old;
                }
            }
        }
        if !improved {
            return best;
        }
    }
}

pub(crate) fn search_combinations(
    source: &Obj,
    target: &Obj,
    basis: &[Mor],
    accept: impl Fn(&Mor) -> bool,
) -> Option<Mor> {
    if basis.is_empty() {
        let z = Mor::zero(source, target);
        return accept(&z).then_some(z);
    }
    if let Some(b) = basis.iter().find(|b| accept(b)) {
        return Some(b.clone());
    }
    let field = source.field();
    let k = basis.len() as u32;
    if let Some(p) = field.order() {
        if p.checked_pow(k).is_some_and(|total| total <= EXHAUSTIVE_LIMIT) {
            let total = p.pow(k);
            for code in 0..total {
                let mut c = code;
                let coeffs: Vec<FieldElem> = (0..k)
                    .map(|_| {
                        let x = field.int((c % p) as i64);
                        c /= p;
                        x
                    })
                    .collect();
                let cand = Mor::combination(source, target, basis, &coeffs).expect("parallel basis");
                if accept(&cand) {
                    return Some(cand);
                }
            }
            return None;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1505);
    for restart in 0..GREEDY_RESTARTS {
        let start: Vec<FieldElem> = (0..k)
            .map(|_| if restart == 0 { field.zero() } else { field.int(rng.gen_range(-3..=3)) })
            .collect();
        let cand = rank_ascent(source, target, basis, start, &mut rng);
        if accept(&cand) {
            return Some(cand);
        }
    }
    for _ in 0..RANDOM_TRIES {
        let coeffs: Vec<FieldElem> = (0..k).map(|_| field.int(rng.gen_range(-7..=7))).collect();
        let cand = Mor::combination(source, target, basis, &coeffs).expect("parallel basis");
        if accept(&cand) {
            return Some(cand);
        }
    }
    None
}
