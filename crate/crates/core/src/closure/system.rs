//! Finite closure systems and the constructions they are built from.
//!
//! A [`ClosureSystem`] is always built from a serializable [`ClosureSpec`];
//! the spec is what travels through scenario files, the compiled rule is what
//! answers closure queries.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::ClosureError;

/// A subset of the carrier, by element index.
pub type ElemSet = FixedBitSet;

/// Anything that can close subsets of a finite carrier `0..len()`.
pub trait Closure {
    fn len(&self) -> usize;

    fn close(&self, set: &ElemSet) -> ElemSet;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn close_slice(&self, elems: &[usize]) -> ElemSet {
        self.close(&set_of(self.len(), elems.iter().copied()))
    }

    fn close_one(&self, x: usize) -> ElemSet {
        self.close_slice(&[x])
    }

    fn close_empty(&self) -> ElemSet {
        self.close(&ElemSet::with_capacity(self.len()))
    }
}

pub fn set_of(n: usize, elems: impl IntoIterator<Item = usize>) -> ElemSet {
    let mut s = ElemSet::with_capacity(n);
    for e in elems {
        s.insert(e);
    }
    s
}

pub fn members(set: &ElemSet) -> Vec<usize> {
    set.ones().collect()
}

/// Ordered list of opaque element ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Carrier {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl Carrier {
    pub fn new(ids: Vec<String>) -> Result<Self, ClosureError> {
        if ids.is_empty() {
            return Err(ClosureError::EmptyCarrier);
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(ClosureError::DuplicateId(id.clone()));
            }
        }
        Ok(Self { ids, index })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Result<usize, ClosureError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| ClosureError::UnknownElement(id.to_string()))
    }

    pub fn resolve(&self, ids: &[String]) -> Result<Vec<usize>, ClosureError> {
        ids.iter().map(|id| self.index_of(id)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Identity,
    Down,
    Fibered,
    LinearFibered,
    Product,
    Striped,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    Chain,
    Poset,
}

/// A finite partial order on `0..size` given by strict `less` pairs
/// (transitively closed on compilation). A chain ignores `less`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseOrder {
    pub kind: BaseKind,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub less: Vec<(usize, usize)>,
}

impl BaseOrder {
    pub fn chain(size: usize) -> Self {
        Self { kind: BaseKind::Chain, size, less: Vec::new() }
    }

    pub fn poset(size: usize, less: Vec<(usize, usize)>) -> Self {
        Self { kind: BaseKind::Poset, size, less }
    }

    pub fn antichain(size: usize) -> Self {
        Self::poset(size, Vec::new())
    }

    pub fn is_linear(&self) -> Result<bool, ClosureError> {
        let below = self.down_sets()?;
        Ok((0..self.size).all(|x| (0..self.size).all(|y| below[x].contains(y) || below[y].contains(x))))
    }

    /// `down_sets()[x]` is `{ t | t <= x }`.
    pub fn down_sets(&self) -> Result<Vec<ElemSet>, ClosureError> {
        let n = self.size;
        let mut below: Vec<ElemSet> = (0..n).map(|x| set_of(n, [x])).collect();
        match self.kind {
            BaseKind::Chain => {
                for (x, b) in below.iter_mut().enumerate() {
                    b.insert_range(0..x + 1);
                }
            }
            BaseKind::Poset => {
                for &(a, b) in &self.less {
                    if a >= n || b >= n {
                        return Err(ClosureError::BadOrder(format!("pair ({a},{b}) outside 0..{n}")));
                    }
                    below[b].insert(a);
                }
                // Warshall-style closure; sizes here are tiny.
                loop {
                    let mut changed = false;
                    for x in 0..n {
                        let mut acc = below[x].clone();
                        for y in below[x].ones() {
                            acc.union_with(&below[y]);
                        }
                        if acc != below[x] {
                            below[x] = acc;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
                for x in 0..n {
                    for y in below[x].ones() {
                        if y != x && below[y].contains(x) {
                            return Err(ClosureError::BadOrder(format!("cycle through {x} and {y}")));
                        }
                    }
                }
            }
        }
        Ok(below)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FiberSpec {
    Size(usize),
    Poset { size: usize, #[serde(default)] less: Vec<(usize, usize)> },
}

impl FiberSpec {
    pub fn size(&self) -> usize {
        match self {
            FiberSpec::Size(s) | FiberSpec::Poset { size: s, .. } => *s,
        }
    }

    pub fn order(&self) -> BaseOrder {
        match self {
            FiberSpec::Size(s) => BaseOrder::antichain(*s),
            FiberSpec::Poset { size, less } => BaseOrder::poset(*size, less.clone()),
        }
    }
}

/// Closure given on singletons; `cl(X) = cl(∅) ∪ ⋃ cl(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSpec {
    #[serde(default)]
    pub empty: Vec<String>,
    pub singles: BTreeMap<String, Vec<String>>,
}

/// Places the carrier inside a larger finite chain. Positions not occupied
/// by carrier elements are foreign points of the ambient order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambient {
    pub size: usize,
    pub positions: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureSpec {
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseOrder>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fibers: Vec<FiberSpec>,
    /// Number of extra elements that lie in `cl(∅)` (fibered kinds only).
    #[serde(default, skip_serializing_if = "is_zero")]
    pub background: usize,
    /// Optional base point per element (`null` = background) for fibered kinds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<Option<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<Ambient>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl ClosureSpec {
    pub fn new(construction: Construction) -> Self {
        Self {
            construction,
            base: None,
            fibers: Vec::new(),
            background: 0,
            assignment: None,
            elements: None,
            table: None,
            ambient: None,
        }
    }

    pub fn with_base(mut self, base: BaseOrder) -> Self {
        self.base = Some(base);
        self
    }

    pub fn with_fibers(mut self, fibers: Vec<FiberSpec>) -> Self {
        self.fibers = fibers;
        self
    }

    pub fn with_elements(mut self, ids: Vec<String>) -> Self {
        self.elements = Some(ids);
        self
    }
}

#[derive(Clone, Debug)]
enum Rule {
    Identity,
    Down { below: Vec<ElemSet> },
    Fibered { fiber_of: Vec<Option<usize>>, base_below: Vec<ElemSet>, fiber_members: Vec<ElemSet>, background: ElemSet },
    Table { empty: ElemSet, singles: Vec<ElemSet> },
}

/// A finite closure system `(P, cl)` with a closed-form closure.
#[derive(Clone, Debug)]
pub struct ClosureSystem {
    spec: ClosureSpec,
    carrier: Carrier,
    rule: Rule,
    /// Per-element position in the natural order of the construction, where one exists.
    natural: Option<Vec<ElemSet>>,
}

impl PartialEq for ClosureSystem {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Closure for ClosureSystem {
    fn len(&self) -> usize {
        self.carrier.len()
    }

    fn close(&self, set: &ElemSet) -> ElemSet {
        let n = self.len();
        match &self.rule {
            Rule::Identity => {
                let mut out = set.clone();
                out.grow(n);
                out
            }
            Rule::Down { below } => {
                let mut out = ElemSet::with_capacity(n);
                for x in set.ones() {
                    out.union_with(&below[x]);
                }
                out
            }
            Rule::Fibered { fiber_of, base_below, fiber_members, background } => {
                let mut bases = ElemSet::with_capacity(base_below.len());
                let mut out = background.clone();
                for x in set.ones() {
                    match fiber_of[x] {
                        Some(b) => bases.union_with(&base_below[b]),
                        None => out.insert(x),
                    }
                }
                for b in bases.ones() {
                    out.union_with(&fiber_members[b]);
                }
                out
            }
            Rule::Table { empty, singles } => {
                let mut out = empty.clone();
                for x in set.ones() {
                    out.union_with(&singles[x]);
                }
                out
            }
        }
    }
}

impl ClosureSystem {
    /// Compiles a spec into a closure system (`cl_from_poset` plus the
    /// identity and table kinds).
    pub fn from_spec(spec: ClosureSpec) -> Result<Self, ClosureError> {
        let (ids, rule, natural) = compile(&spec)?;
        let carrier = Carrier::new(ids)?;
        if let Some(amb) = &spec.ambient {
            if amb.positions.len() != carrier.len() {
                return Err(ClosureError::Arity(format!(
                    "ambient has {} positions for {} elements",
                    amb.positions.len(),
                    carrier.len()
                )));
            }
            let mut seen = ElemSet::with_capacity(amb.size);
            for &p in &amb.positions {
                if p >= amb.size || seen.put(p) {
                    return Err(ClosureError::BadOrder(format!("ambient position {p} invalid or repeated")));
                }
            }
        }
        Ok(Self { spec, carrier, rule, natural })
    }

    pub fn spec(&self) -> &ClosureSpec {
        &self.spec
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn ambient(&self) -> Option<&Ambient> {
        self.spec.ambient.as_ref()
    }

    /// The order the construction was built from, lifted to the carrier
    /// (`natural_less()[x]` = elements strictly above `x`), when it has one.
    pub fn natural_less(&self) -> Option<&[ElemSet]> {
        self.natural.as_deref()
    }

    pub fn ids_of(&self, set: &ElemSet) -> Vec<String> {
        set.ones().map(|i| self.carrier.id(i).to_string()).collect()
    }
}

/// Builds the closed-form closure of one of the standard constructions.
pub fn cl_from_poset(
    construction: Construction,
    base: BaseOrder,
    fibers: Vec<FiberSpec>,
) -> Result<ClosureSystem, ClosureError> {
    ClosureSystem::from_spec(ClosureSpec::new(construction).with_base(base).with_fibers(fibers))
}

type Compiled = (Vec<String>, Rule, Option<Vec<ElemSet>>);

fn compile(spec: &ClosureSpec) -> Result<Compiled, ClosureError> {
    let base = || spec.base.clone().ok_or_else(|| ClosureError::Arity("construction needs a base order".into()));
    let require_linear = |b: &BaseOrder| -> Result<(), ClosureError> {
        if b.is_linear()? {
            Ok(())
        } else {
            Err(ClosureError::RequiresLinearBase)
        }
    };
    let named = |default: Vec<String>| -> Result<Vec<String>, ClosureError> {
        match &spec.elements {
            Some(ids) if ids.len() != default.len() => Err(ClosureError::Arity(format!(
                "{} element ids given for {} elements",
                ids.len(),
                default.len()
            ))),
            Some(ids) => Ok(ids.clone()),
            None => Ok(default),
        }
    };

    match spec.construction {
        Construction::Identity => {
            let n = match (&spec.elements, &spec.base) {
                (Some(ids), _) => ids.len(),
                (None, Some(b)) => b.size,
                (None, None) => return Err(ClosureError::Arity("identity needs elements or a base size".into())),
            };
            let ids = named((0..n).map(|i| i.to_string()).collect())?;
            Ok((ids, Rule::Identity, None))
        }
        Construction::Down => {
            let b = base()?;
            if !spec.fibers.is_empty() {
                return Err(ClosureError::Arity("down-closure takes no fibers".into()));
            }
            let below = b.down_sets()?;
            let ids = named((0..b.size).map(|i| i.to_string()).collect())?;
            let natural = strict_above(&below);
            Ok((ids, Rule::Down { below }, Some(natural)))
        }
        Construction::Striped => {
            let b = base()?;
            require_linear(&b)?;
            if !spec.fibers.is_empty() {
                return Err(ClosureError::Arity("striped order takes no fibers".into()));
            }
            // (x, i) <= (y, j) iff x <= y and i == j; element (x, i) has index 2x + i.
            let l = b.size;
            let n = 2 * l;
            let lb = b.down_sets()?;
            let mut below = vec![ElemSet::with_capacity(n); n];
            for x in 0..l {
                for i in 0..2 {
                    for t in lb[x].ones() {
                        below[2 * x + i].insert(2 * t + i);
                    }
                }
            }
            let ids = named((0..l).flat_map(|x| (0..2).map(move |i| format!("{x}.{i}"))).collect())?;
            let natural = strict_above(&below);
            Ok((ids, Rule::Down { below }, Some(natural)))
        }
        Construction::Fibered | Construction::LinearFibered | Construction::Product => {
            let b = base()?;
            if spec.construction != Construction::Fibered {
                require_linear(&b)?;
            }
            let fibers: Vec<FiberSpec> = if spec.construction == Construction::Product {
                if spec.fibers.len() != 1 {
                    return Err(ClosureError::Arity(format!(
                        "product takes exactly one fiber, got {}",
                        spec.fibers.len()
                    )));
                }
                vec![spec.fibers[0].clone(); b.size]
            } else {
                if spec.fibers.len() != b.size {
                    return Err(ClosureError::Arity(format!(
                        "{} fibers for a base of size {}",
                        spec.fibers.len(),
                        b.size
                    )));
                }
                spec.fibers.clone()
            };
            if let Some(f) = fibers.iter().position(|f| f.size() == 0) {
                return Err(ClosureError::Arity(format!("fiber {f} is empty")));
            }
            compile_fibered(spec, &b, &fibers, named)
        }
        Construction::Table => {
            let table = spec.table.as_ref().ok_or_else(|| ClosureError::Arity("table construction needs a table".into()))?;
            let ids = spec
                .elements
                .clone()
                .ok_or_else(|| ClosureError::Arity("table construction needs element ids".into()))?;
            let carrier = Carrier::new(ids.clone())?;
            let n = ids.len();
            let empty = set_of(n, carrier.resolve(&table.empty)?);
            let mut singles = vec![ElemSet::with_capacity(n); n];
            for (id, cl) in &table.singles {
                let x = carrier.index_of(id)?;
                singles[x] = set_of(n, carrier.resolve(cl)?);
            }
            Ok((ids, Rule::Table { empty, singles }, None))
        }
    }
}

fn compile_fibered(
    spec: &ClosureSpec,
    base: &BaseOrder,
    fibers: &[FiberSpec],
    named: impl Fn(Vec<String>) -> Result<Vec<String>, ClosureError>,
) -> Result<Compiled, ClosureError> {
    let fiber_total: usize = fibers.iter().map(FiberSpec::size).sum();
    let n = fiber_total + spec.background;

    // Element -> (base point, index inside the fiber).
    let placement: Vec<Option<(usize, usize)>> = match &spec.assignment {
        None => {
            let mut v = Vec::with_capacity(n);
            for (b, f) in fibers.iter().enumerate() {
                v.extend((0..f.size()).map(|j| Some((b, j))));
            }
            v.extend((0..spec.background).map(|_| None));
            v
        }
        Some(assign) => {
            if assign.len() != n {
                return Err(ClosureError::Arity(format!("assignment has {} entries for {n} elements", assign.len())));
            }
            let mut seen = vec![0usize; base.size];
            let mut v = Vec::with_capacity(n);
            for a in assign {
                match *a {
                    Some(b) if b >= base.size => {
                        return Err(ClosureError::Arity(format!("assignment names base point {b}")))
                    }
                    Some(b) => {
                        v.push(Some((b, seen[b])));
                        seen[b] += 1;
                    }
                    None => v.push(None),
                }
            }
            if seen.iter().zip(fibers).any(|(&s, f)| s != f.size()) {
                return Err(ClosureError::Arity("assignment does not match fiber sizes".into()));
            }
            v
        }
    };

    let base_below = base.down_sets()?;
    let mut fiber_members = vec![ElemSet::with_capacity(n); base.size];
    let mut background = ElemSet::with_capacity(n);
    let mut fiber_of = Vec::with_capacity(n);
    let mut default_ids = Vec::with_capacity(n);
    let mut bg_count = 0;
    for (x, p) in placement.iter().enumerate() {
        match p {
            Some((b, j)) => {
                fiber_members[*b].insert(x);
                fiber_of.push(Some(*b));
                default_ids.push(format!("{b}.{j}"));
            }
            None => {
                background.insert(x);
                fiber_of.push(None);
                default_ids.push(format!("z{bg_count}"));
                bg_count += 1;
            }
        }
    }

    // Natural order on Q: x < y iff same fiber and x <_fiber y, or π(x) < π(y).
    let fiber_orders: Vec<Vec<ElemSet>> = fibers.iter().map(|f| f.order().down_sets()).collect::<Result<_, _>>()?;
    let mut natural = vec![ElemSet::with_capacity(n); n];
    for x in 0..n {
        for y in 0..n {
            if let (Some((bx, jx)), Some((by, jy))) = (placement[x], placement[y]) {
                let above = if bx == by {
                    jx != jy && fiber_orders[bx][jy].contains(jx)
                } else {
                    base_below[by].contains(bx)
                };
                if above {
                    natural[x].insert(y);
                }
            }
        }
    }

    let ids = named(default_ids)?;
    Ok((ids, Rule::Fibered { fiber_of, base_below, fiber_members, background }, Some(natural)))
}

fn strict_above(below: &[ElemSet]) -> Vec<ElemSet> {
    let n = below.len();
    let mut above = vec![ElemSet::with_capacity(n); n];
    for (y, b) in below.iter().enumerate() {
        for x in b.ones() {
            if x != y {
                above[x].insert(y);
            }
        }
    }
    above
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn down_closure_of_chain() {
        let sys = cl_from_poset(Construction::Down, BaseOrder::chain(3), vec![]).unwrap();
        assert_eq!(members(&sys.close_slice(&[1])), vec![0, 1]);
        assert!(sys.close_empty().is_clear());
    }

    #[test]
    fn linear_fibered_closes_lower_fibers() {
        let sys = cl_from_poset(
            Construction::LinearFibered,
            BaseOrder::chain(2),
            vec![FiberSpec::Size(2), FiberSpec::Size(3)],
        )
        .unwrap();
        assert_eq!(sys.len(), 5);
        assert_eq!(members(&sys.close_slice(&[0])), vec![0, 1]);
        assert_eq!(members(&sys.close_slice(&[3])), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn fiber_arity_is_checked() {
        let err = cl_from_poset(Construction::Fibered, BaseOrder::chain(3), vec![FiberSpec::Size(1)]).unwrap_err();
        assert!(matches!(err, ClosureError::Arity(_)));
    }

    #[test]
    fn linear_kinds_reject_posets() {
        let err = cl_from_poset(Construction::Striped, BaseOrder::antichain(2), vec![]).unwrap_err();
        assert!(matches!(err, ClosureError::RequiresLinearBase));
    }

    #[test]
    fn poset_cycles_are_rejected() {
        let err = cl_from_poset(Construction::Down, BaseOrder::poset(2, vec![(0, 1), (1, 0)]), vec![]).unwrap_err();
        assert!(matches!(err, ClosureError::BadOrder(_)));
    }

    #[test]
    fn table_closure_is_union_of_singletons() {
        let mut singles = BTreeMap::new();
        singles.insert("a".to_string(), vec!["a".to_string()]);
        singles.insert("b".to_string(), vec!["a".to_string(), "b".to_string()]);
        let spec = ClosureSpec {
            table: Some(TableSpec { empty: vec![], singles }),
            ..ClosureSpec::new(Construction::Table).with_elements(vec!["a".into(), "b".into()])
        };
        let sys = ClosureSystem::from_spec(spec).unwrap();
        assert_eq!(members(&sys.close_slice(&[1])), vec![0, 1]);
    }

    #[test]
    fn spec_round_trips_through_json() {
        let spec = ClosureSpec::new(Construction::Product)
            .with_base(BaseOrder::chain(2))
            .with_fibers(vec![FiberSpec::Poset { size: 2, less: vec![(0, 1)] }]);
        let text = serde_json::to_string(&spec).unwrap();
        let back: ClosureSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
