//! Finite L-algebras: validation, the induced order, partial products and
//! the structural predicates.
//!
//! Elements are dense indices `0..n`; labels only matter for I/O.

use std::collections::HashSet;

use crate::error::{AxiomViolation, Equation, Error, Falsification, FalsificationKind, Result};
use crate::subset::{Subset, MAX_ELEMENTS};

/// An unvalidated operation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawAlgebra {
    pub name: String,
    pub labels: Vec<String>,
    pub unit: usize,
    /// `table[i][j]` is the index of `labels[i] · labels[j]`.
    pub table: Vec<Vec<usize>>,
}

impl RawAlgebra {
    /// Labels `"0"`, `"1"`, .. for anonymous tables.
    pub fn with_index_labels(name: impl Into<String>, unit: usize, table: Vec<Vec<usize>>) -> Self {
        let labels = (0..table.len()).map(|i| i.to_string()).collect();
        RawAlgebra {
            name: name.into(),
            labels,
            unit,
            table,
        }
    }
}

/// The order `x ≤ y :⇔ x·y = 1`, stored as up-sets and down-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderRelation {
    up: Vec<Subset>,
    down: Vec<Subset>,
}

impl OrderRelation {
    fn from_table(n: usize, unit: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut up = vec![Subset::EMPTY; n];
        let mut down = vec![Subset::EMPTY; n];
        for x in 0..n {
            for y in 0..n {
                if op(x, y) == unit {
                    up[x].insert(y);
                    down[y].insert(x);
                }
            }
        }
        for x in 0..n {
            for y in up[x] {
                if !up[y].is_subset(up[x]) {
                    let z = (up[y] - up[x]).first().unwrap_or_default();
                    return Err(Falsification::new(
                        FalsificationKind::NotTransitive,
                        format!("{x} <= {y} <= {z} but not {x} <= {z}"),
                    )
                    .elements([x, y, z])
                    .into());
                }
            }
        }
        Ok(OrderRelation { up, down })
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// `↑x`
    #[inline]
    pub fn up(&self, x: usize) -> Subset {
        self.up[x]
    }

    /// `↓y`
    #[inline]
    pub fn down(&self, y: usize) -> Subset {
        self.down[y]
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    /// Covering pairs `(lower, upper)`, in index order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.up[x].without(x) {
                let between = (self.up[x] & self.down[y]).without(x).without(y);
                if between.is_empty() {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Whether `s` is an upper set.
    pub fn is_upper_set(&self, s: Subset) -> bool {
        s.iter().all(|x| self.up[x].is_subset(s))
    }
}

/// A validated finite L-algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLAlgebra {
    name: String,
    labels: Vec<String>,
    unit: usize,
    n: usize,
    table: Vec<u8>,
    order: OrderRelation,
}

/// Checks the axioms and returns the algebra, or every violated instance.
pub fn validate(raw: RawAlgebra) -> Result<FiniteLAlgebra> {
    let n = raw.table.len();
    if n == 0 {
        return Err(Error::MalformedTable("empty carrier".into()));
    }
    if n > MAX_ELEMENTS {
        return Err(Error::TooLarge {
            size: n,
            max: MAX_ELEMENTS,
        });
    }
    if raw.labels.len() != n {
        return Err(Error::MalformedTable(format!(
            "{} labels for {} rows",
            raw.labels.len(),
            n
        )));
    }
    let mut seen = HashSet::new();
    for label in &raw.labels {
        if !seen.insert(label.as_str()) {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }
    if raw.unit >= n {
        return Err(Error::MalformedTable(format!(
            "unit index {} out of range",
            raw.unit
        )));
    }
    let mut table = Vec::with_capacity(n * n);
    for (i, row) in raw.table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::MalformedTable(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(Error::MalformedTable(format!(
                    "entry ({i},{j}) = {v} out of range"
                )));
            }
            table.push(v as u8);
        }
    }

    let unit = raw.unit;
    let op = |x: usize, y: usize| table[x * n + y] as usize;
    let mut violations = Vec::new();
    for x in 0..n {
        if op(x, x) != unit || op(x, unit) != unit || op(unit, x) != x {
            violations.push(AxiomViolation {
                equation: Equation::LogicalUnit,
                witness: vec![x],
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if op(op(x, y), op(x, z)) != op(op(y, x), op(y, z)) {
                    violations.push(AxiomViolation {
                        equation: Equation::CycleEquation,
                        witness: vec![x, y, z],
                    });
                }
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if op(x, y) == unit && op(y, x) == unit {
                violations.push(AxiomViolation {
                    equation: Equation::Antisymmetry,
                    witness: vec![x, y],
                });
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::AxiomViolations(violations));
    }

    let order = OrderRelation::from_table(n, unit, op)?;
    let algebra = FiniteLAlgebra {
        name: raw.name,
        labels: raw.labels,
        unit,
        n,
        table,
        order,
    };
    algebra.check_sigma_injective()?;
    Ok(algebra)
}

impl FiniteLAlgebra {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn unit(&self) -> usize {
        self.unit
    }

    /// `x · y`
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn order(&self) -> &OrderRelation {
        &self.order
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.order.leq(x, y)
    }

    pub fn carrier(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|x| (0..self.n).map(|y| self.op(x, y)).collect())
            .collect()
    }

    pub fn to_raw(&self) -> RawAlgebra {
        RawAlgebra {
            name: self.name.clone(),
            labels: self.labels.clone(),
            unit: self.unit,
            table: self.table_rows(),
        }
    }

    /// Renders a subset as `{a, b, ..}` using labels.
    pub fn format_subset(&self, s: Subset) -> String {
        let names: Vec<&str> = s.iter().map(|i| self.label(i)).collect();
        format!("{{{}}}", names.join(", "))
    }

    pub fn subset_labels(&self, s: Subset) -> Vec<String> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// Whether `s` is closed under the operation.
    pub fn is_subalgebra(&self, s: Subset) -> bool {
        s.iter()
            .all(|x| s.iter().all(|y| s.contains(self.op(x, y))))
    }

    /// The L-subalgebra on `s`, with elements in index order.
    pub fn subalgebra(&self, s: Subset, name: impl Into<String>) -> Result<FiniteLAlgebra> {
        if !s.contains(self.unit) || !self.is_subalgebra(s) {
            return Err(Falsification::new(
                FalsificationKind::NotASubalgebra,
                format!(
                    "{} is not closed under the operation",
                    self.format_subset(s)
                ),
            )
            .ideals([s])
            .into());
        }
        let members: Vec<usize> = s.iter().collect();
        let pos = |x: usize| members.iter().position(|&m| m == x).unwrap();
        let raw = RawAlgebra {
            name: name.into(),
            labels: members.iter().map(|&x| self.labels[x].clone()).collect(),
            unit: pos(self.unit),
            table: members
                .iter()
                .map(|&x| members.iter().map(|&y| pos(self.op(x, y))).collect())
                .collect(),
        };
        validate(raw)
    }

    fn check_sigma_injective(&self) -> Result<()> {
        for y in self.elements() {
            let mut images = Subset::EMPTY;
            for z in self.order.down(y) {
                if !images.insert(self.op(y, z)) {
                    let clash: Vec<usize> = self
                        .order
                        .down(y)
                        .iter()
                        .filter(|&w| self.op(y, w) == self.op(y, z))
                        .collect();
                    return Err(Falsification::new(
                        FalsificationKind::NonUniqueProduct,
                        format!("sigma_{} is not injective", self.label(y)),
                    )
                    .elements(std::iter::once(y).chain(clash))
                    .into());
                }
            }
        }
        Ok(())
    }

    /// The partial product `xy`: the `z ≤ y` with `y·z = x`, if any.
    pub fn partial_product(&self, x: usize, y: usize) -> Result<Option<usize>> {
        let mut found = self.order.down(y).iter().filter(|&z| self.op(y, z) == x);
        let first = found.next();
        let rest: Vec<usize> = found.collect();
        if !rest.is_empty() {
            return Err(Falsification::new(
                FalsificationKind::NonUniqueProduct,
                format!(
                    "product of {} and {} is not unique",
                    self.label(x),
                    self.label(y)
                ),
            )
            .elements([x, y])
            .elements(first)
            .elements(rest)
            .into());
        }
        Ok(first)
    }

    /// Partial product where uniqueness is already established by validation.
    fn product(&self, x: usize, y: usize) -> Option<usize> {
        self.order.down(y).iter().find(|&z| self.op(y, z) == x)
    }

    /// Greatest lower bound of `a` and `b` in the order, if it exists.
    pub fn glb(&self, a: usize, b: usize) -> Option<usize> {
        let lower = self.order.down(a) & self.order.down(b);
        lower.iter().find(|&c| lower.is_subset(self.order.down(c)))
    }

    /// `a ∧ b = (a·b)a = (b·a)b`, defined only when both partial products
    /// exist, agree, and are the greatest lower bound of `a` and `b`.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let left = self.product(self.op(a, b), a)?;
        let right = self.product(self.op(b, a), b)?;
        (left == right && self.glb(a, b) == Some(left)).then_some(left)
    }

    /// `σ_y: ↓y → X`, `z ↦ y·z` is a bijection.
    pub fn sigma_bijective(&self, y: usize) -> bool {
        // injectivity holds after validation
        self.order.down(y).len() == self.n
    }

    pub fn structure_flags(&self) -> StructureFlags {
        let all = |f: &dyn Fn(usize, usize) -> bool| {
            self.elements().all(|x| self.elements().all(|y| f(x, y)))
        };
        let sharp = all(&|x, y| self.op(x, self.op(x, y)) == self.op(x, y));
        let discrete = self
            .elements()
            .filter(|&x| x != self.unit)
            .all(|x| (self.order.up(x).without(x).without(self.unit)).is_empty());
        let meet_closed = all(&|x, y| self.meet(x, y).is_some());
        let brouwerian = meet_closed
            && self.elements().all(|x| {
                self.elements().all(|y| {
                    let m = self.meet(x, y).expect("meet-closed");
                    self.elements()
                        .all(|z| self.leq(m, z) == self.leq(x, self.op(y, z)))
                })
            });
        let self_similar = self.elements().all(|y| self.sigma_bijective(y));

        let mut meet_asymmetries = Vec::new();
        for a in self.elements() {
            for b in a + 1..self.n {
                if let (Some(l), Some(r)) = (
                    self.product(self.op(a, b), a),
                    self.product(self.op(b, a), b),
                ) {
                    if l != r {
                        meet_asymmetries.push((a, b));
                    }
                }
            }
        }
        StructureFlags {
            sharp,
            discrete,
            brouwerian,
            meet_closed,
            self_similar,
            meet_asymmetries,
        }
    }
}

/// Recomputes the order from the table and checks it is a partial order
/// with the unit on top.
pub fn derive_order(x: &FiniteLAlgebra) -> Result<OrderRelation> {
    let order = OrderRelation::from_table(x.size(), x.unit(), |a, b| x.op(a, b))?;
    for a in x.elements() {
        let antisym = order.up(a) & order.down(a);
        if antisym != Subset::singleton(a) || !order.leq(a, x.unit()) {
            return Err(Falsification::new(
                FalsificationKind::NotTransitive,
                format!("order is not a partial order with top at {}", x.label(a)),
            )
            .elements([a])
            .into());
        }
    }
    Ok(order)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StructureFlags {
    pub sharp: bool,
    pub discrete: bool,
    pub brouwerian: bool,
    pub meet_closed: bool,
    pub self_similar: bool,
    /// Pairs `a < b` (by index) where `(a·b)a` and `(b·a)b` both exist but differ.
    pub meet_asymmetries: Vec<(usize, usize)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::fixture;

    fn b2() -> FiniteLAlgebra {
        // elements 1, 0
        validate(RawAlgebra {
            name: "B2".into(),
            labels: vec!["1".into(), "0".into()],
            unit: 0,
            table: vec![vec![0, 1], vec![0, 0]],
        })
        .unwrap()
    }

    #[test]
    fn boolean_two_validates() {
        let b = b2();
        assert_eq!(b.size(), 2);
        assert!(b.leq(1, 0));
        assert!(!b.leq(0, 1));
    }

    #[test]
    fn unit_only_validates() {
        let one = validate(RawAlgebra::with_index_labels("one", 0, vec![vec![0]])).unwrap();
        assert_eq!(one.size(), 1);
        assert!(one.structure_flags().self_similar);
    }

    #[test]
    fn broken_diagonal_is_reported() {
        let mut raw = b2().to_raw();
        raw.table[1][1] = 1; // 0·0 = 0
        match validate(raw) {
            Err(Error::AxiomViolations(v)) => {
                assert!(v.contains(&AxiomViolation {
                    equation: Equation::LogicalUnit,
                    witness: vec![1],
                }));
            }
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn all_violations_are_reported() {
        // every entry 0 on three elements: 1·x = x fails for x != 1, and
        // every pair is mutually below
        let raw = RawAlgebra::with_index_labels("bad", 0, vec![vec![0; 3]; 3]);
        let Err(Error::AxiomViolations(v)) = validate(raw) else {
            panic!("expected violations")
        };
        let eq1 = v
            .iter()
            .filter(|v| v.equation == Equation::LogicalUnit)
            .count();
        let eq3 = v
            .iter()
            .filter(|v| v.equation == Equation::Antisymmetry)
            .count();
        assert_eq!(eq1, 2);
        assert_eq!(eq3, 3);
    }

    #[test]
    fn malformed_tables() {
        let raw = RawAlgebra::with_index_labels("x", 0, vec![vec![0, 2], vec![0, 0]]);
        assert!(matches!(validate(raw), Err(Error::MalformedTable(_))));
        let raw = RawAlgebra::with_index_labels("x", 0, vec![vec![0, 1], vec![0]]);
        assert!(matches!(validate(raw), Err(Error::MalformedTable(_))));
        let mut raw = RawAlgebra::with_index_labels("x", 0, vec![vec![0, 1], vec![0, 0]]);
        raw.labels[1] = "0".into();
        assert!(matches!(validate(raw), Err(Error::DuplicateLabel(_))));
        let raw = RawAlgebra::with_index_labels("x", 0, vec![]);
        assert!(matches!(validate(raw), Err(Error::MalformedTable(_))));
    }

    #[test]
    fn diamond_order_is_the_square() {
        let d = fixture("diamond").unwrap();
        let [one, p, q, zero] = ["1", "p", "q", "0"].map(|l| d.index_of(l).unwrap());
        let mut covers = d.order().covers();
        covers.sort();
        let mut expected = vec![(zero, p), (zero, q), (p, one), (q, one)];
        expected.sort();
        assert_eq!(covers, expected);
        assert!(!d.leq(p, q) && !d.leq(q, p));
        assert_eq!(derive_order(&d).unwrap(), *d.order());
    }

    #[test]
    fn chain_order_is_total() {
        let c = fixture("chain3").unwrap();
        for x in c.elements() {
            for y in c.elements() {
                assert!(c.leq(x, y) || c.leq(y, x));
            }
        }
        assert_eq!(c.order().covers().len(), 2);
    }

    #[test]
    fn partial_products() {
        let b = b2();
        assert_eq!(b.partial_product(1, 0).unwrap(), Some(1));
        for y in b.elements() {
            assert_eq!(b.partial_product(b.unit(), y).unwrap(), Some(y));
        }
        let d = fixture("diamond").unwrap();
        let [p, zero] = ["p", "0"].map(|l| d.index_of(l).unwrap());
        assert_eq!(d.partial_product(zero, p).unwrap(), Some(zero));
    }

    #[test]
    fn meets() {
        let b = b2();
        assert_eq!(b.meet(0, 1), Some(1));
        assert_eq!(b.meet(1, 1), Some(1));
        let d = fixture("diamond").unwrap();
        let [p, q, zero] = ["p", "q", "0"].map(|l| d.index_of(l).unwrap());
        assert_eq!(d.meet(p, q), Some(zero));
        for a in d.elements() {
            assert_eq!(d.meet(a, a), Some(a));
        }
    }

    #[test]
    fn flags_of_fixtures() {
        let f = b2().structure_flags();
        assert!(f.sharp && f.discrete && f.brouwerian && f.meet_closed);
        assert!(!f.self_similar);

        let d = fixture("diamond").unwrap().structure_flags();
        assert!(d.meet_closed);
        assert!(!d.brouwerian);
        assert!(!d.discrete);
    }
}
