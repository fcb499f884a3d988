//! Builders for derived algebras, the named fixture corpus, and the
//! exhaustive small-size enumerator.

use std::collections::HashSet;

use itertools::Itertools;

use crate::algebra::{validate, FiniteLAlgebra, RawAlgebra};
use crate::error::{Error, Falsification, FalsificationKind, Result};
use crate::ideals::{enumerate_ideals, FILTER_LIMIT};
use crate::subset::{Subset, MAX_ELEMENTS};

/// `X × Y` with its canonical embeddings.
#[derive(Debug, Clone)]
pub struct Product {
    pub algebra: FiniteLAlgebra,
    /// `left[x]` is the index of `(x, 1)`.
    pub left: Vec<usize>,
    /// `right[y]` is the index of `(1, y)`.
    pub right: Vec<usize>,
}

impl Product {
    /// Index of the pair `(x, y)`; pairs are laid out row-major.
    pub fn pair(&self, x: usize, y: usize) -> usize {
        x * self.right.len() + y
    }

    pub fn left_subset(&self) -> Subset {
        self.left.iter().copied().collect()
    }

    pub fn right_subset(&self) -> Subset {
        self.right.iter().copied().collect()
    }
}

/// Componentwise product, pairs in row-major order.
pub fn product(x: &FiniteLAlgebra, y: &FiniteLAlgebra) -> Result<Product> {
    let (n, m) = (x.size(), y.size());
    if n * m > MAX_ELEMENTS {
        return Err(Error::TooLarge {
            size: n * m,
            max: MAX_ELEMENTS,
        });
    }
    let idx = |a: usize, b: usize| a * m + b;
    let mut labels = Vec::with_capacity(n * m);
    let mut table = vec![Vec::with_capacity(n * m); n * m];
    for a in x.elements() {
        for b in y.elements() {
            labels.push(format!("({},{})", x.label(a), y.label(b)));
            for c in x.elements() {
                for d in y.elements() {
                    table[idx(a, b)].push(idx(x.op(a, c), y.op(b, d)));
                }
            }
        }
    }
    let algebra = validate(RawAlgebra {
        name: format!("{}x{}", x.name(), y.name()),
        labels,
        unit: idx(x.unit(), y.unit()),
        table,
    })?;
    let left: Vec<usize> = x.elements().map(|a| idx(a, y.unit())).collect();
    let right: Vec<usize> = y.elements().map(|b| idx(x.unit(), b)).collect();
    for &l in &left {
        for &r in &right {
            if algebra.op(l, r) != r || algebra.op(r, l) != l {
                return Err(Falsification::new(
                    FalsificationKind::ProductMismatch,
                    format!(
                        "embedded {} and {} do not act as identities on each other",
                        algebra.label(l),
                        algebra.label(r)
                    ),
                )
                .elements([l, r])
                .into());
            }
        }
    }
    Ok(Product {
        algebra,
        left,
        right,
    })
}

/// The ordered sum: `X∖{1}` placed below all of `Y`. Elements of `X∖{1}`
/// come first; a label that collides with one of `Y` gets a `'` suffix.
pub fn ordered_sum(x: &FiniteLAlgebra, y: &FiniteLAlgebra) -> Result<FiniteLAlgebra> {
    let lower: Vec<usize> = x.elements().filter(|&a| a != x.unit()).collect();
    let k = lower.len();
    let total = k + y.size();
    if total > MAX_ELEMENTS {
        return Err(Error::TooLarge {
            size: total,
            max: MAX_ELEMENTS,
        });
    }
    let unit = k + y.unit();
    let pos_x = |a: usize| {
        if a == x.unit() {
            unit
        } else {
            lower.iter().position(|&l| l == a).unwrap()
        }
    };
    let y_labels: HashSet<&str> = y.labels().iter().map(String::as_str).collect();
    let mut labels: Vec<String> = Vec::with_capacity(total);
    for &a in &lower {
        let mut label = x.label(a).to_string();
        while y_labels.contains(label.as_str()) || labels.contains(&label) {
            label.push('\'');
        }
        labels.push(label);
    }
    labels.extend(y.labels().iter().cloned());

    let mut table = vec![vec![0; total]; total];
    for (i, &a) in lower.iter().enumerate() {
        for (j, &b) in lower.iter().enumerate() {
            table[i][j] = pos_x(x.op(a, b));
        }
        for b in y.elements() {
            table[i][k + b] = unit;
            table[k + b][i] = i;
        }
    }
    for a in y.elements() {
        for b in y.elements() {
            table[k + a][k + b] = k + y.op(a, b);
        }
    }
    validate(RawAlgebra {
        name: format!("{}+{}", x.name(), y.name()),
        labels,
        unit,
        table,
    })
    .map_err(|e| match e {
        Error::AxiomViolations(v) => Falsification::new(
            FalsificationKind::OrderedSumInvalid,
            format!("ordered sum fails {} axiom instance(s)", v.len()),
        )
        .elements(v.into_iter().flat_map(|v| v.witness))
        .into(),
        other => other,
    })
}

/// A finite poset with a greatest element, given by covering pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetSpec {
    pub name: String,
    pub elements: Vec<String>,
    /// `(lower, upper)` pairs.
    pub covers: Vec<(String, String)>,
    pub top: String,
}

impl PosetSpec {
    pub fn new(name: &str, elements: &[&str], covers: &[(&str, &str)], top: &str) -> Self {
        PosetSpec {
            name: name.into(),
            elements: elements.iter().map(|s| s.to_string()).collect(),
            covers: covers
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            top: top.into(),
        }
    }

    /// Reflexive-transitive closure as `leq[a][b]`.
    pub fn closure(&self) -> Result<Vec<Vec<bool>>> {
        let n = self.elements.len();
        let find = |l: &str| {
            self.elements
                .iter()
                .position(|e| e == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in &self.covers {
            leq[find(a)?][find(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidPoset(format!(
                        "cycle through {} and {}",
                        self.elements[i], self.elements[j]
                    )));
                }
            }
        }
        let top = find(&self.top)?;
        if let Some(i) = (0..n).find(|&i| !leq[i][top]) {
            return Err(Error::InvalidPoset(format!(
                "{} is not below the top {}",
                self.elements[i], self.top
            )));
        }
        Ok(leq)
    }
}

/// `x·y = 1` if `x ≤ y`, else `y`. Checks that the ideals are exactly the
/// upper sets.
pub fn poset_algebra(spec: &PosetSpec) -> Result<FiniteLAlgebra> {
    let leq = spec.closure()?;
    let n = spec.elements.len();
    let mut seen = HashSet::new();
    if let Some(dup) = spec.elements.iter().find(|e| !seen.insert(e.as_str())) {
        return Err(Error::DuplicateLabel(dup.clone()));
    }
    let top = spec.elements.iter().position(|e| *e == spec.top).unwrap();
    let table = (0..n)
        .map(|a| (0..n).map(|b| if leq[a][b] { top } else { b }).collect())
        .collect();
    let algebra = validate(RawAlgebra {
        name: spec.name.clone(),
        labels: spec.elements.clone(),
        unit: top,
        table,
    })?;
    if n <= FILTER_LIMIT {
        let lattice = enumerate_ideals(&algebra)?;
        let order = algebra.order();
        let others: Vec<usize> = algebra.elements().filter(|&e| e != top).collect();
        let mut upper = Vec::new();
        for mask in 0u64..1 << others.len() {
            let s: Subset = others
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &e)| e)
                .collect::<Subset>()
                .with(top);
            if order.is_upper_set(s) {
                upper.push(s);
            }
        }
        upper.sort_by_key(|s| (s.len(), s.bits()));
        if upper != lattice.ideals() {
            return Err(Falsification::new(
                FalsificationKind::UpperSetMismatch,
                format!("{} upper sets but {} ideals", upper.len(), lattice.len()),
            )
            .into());
        }
    }
    Ok(algebra)
}

/// Facts a fixture is known to satisfy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expected {
    pub ideals: Option<usize>,
    pub spectrum: Option<usize>,
    pub brouwerian: Option<bool>,
    pub meet_closed: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub algebra: FiniteLAlgebra,
    pub expected: Expected,
}

const FIXTURE_NAMES: [&str; 10] = [
    "one",
    "B2",
    "diamond",
    "chain3",
    "omega3",
    "omega5",
    "example5",
    "diamond_poset",
    "B2xB2",
    "diamondxB2",
];

pub fn fixture_names() -> &'static [&'static str] {
    &FIXTURE_NAMES
}

fn expect(ideals: usize, spectrum: usize, brouwerian: bool, meet_closed: bool) -> Expected {
    Expected {
        ideals: Some(ideals),
        spectrum: Some(spectrum),
        brouwerian: Some(brouwerian),
        meet_closed: Some(meet_closed),
    }
}

fn labelled(
    name: &str,
    labels: &[&str],
    unit: usize,
    table: Vec<Vec<usize>>,
) -> Result<FiniteLAlgebra> {
    validate(RawAlgebra {
        name: name.into(),
        labels: labels.iter().map(|s| s.to_string()).collect(),
        unit,
        table,
    })
}

/// The four-element algebra `{1, p, q, 0}` with `p·q = p·0 = q·p = q·0 = 0`;
/// every other entry is forced by the unit laws and the square order.
fn diamond() -> Result<FiniteLAlgebra> {
    const ONE: usize = 0;
    const P: usize = 1;
    const Q: usize = 2;
    const ZERO: usize = 3;
    let mut t = vec![vec![ONE; 4]; 4];
    for (x, row) in t.iter_mut().enumerate() {
        row[x] = ONE;
        row[ONE] = ONE;
    }
    t[ONE] = vec![ONE, P, Q, ZERO];
    t[P][Q] = ZERO;
    t[P][ZERO] = ZERO;
    t[Q][P] = ZERO;
    t[Q][ZERO] = ZERO;
    // 0 is the bottom, so 0·z = 1
    labelled("diamond", &["1", "p", "q", "0"], ONE, t)
}

fn omega(n: usize) -> Result<FiniteLAlgebra> {
    let chain: Vec<String> = (2..=n).map(|i| format!("x{i}")).collect();
    let mut elements = vec!["1", "x", "y"];
    elements.extend(chain.iter().map(String::as_str));
    let mut covers = vec![("x", "1"), ("y", "x")];
    let mut above = "x";
    for c in &chain {
        covers.push((c.as_str(), above));
        above = c.as_str();
    }
    poset_algebra(&PosetSpec::new(
        &format!("omega{n}"),
        &elements,
        &covers,
        "1",
    ))
}

fn build_fixture(name: &str) -> Result<Fixture> {
    let (name, algebra, expected) = match name {
        "one" => (
            "one",
            labelled("one", &["1"], 0, vec![vec![0]])?,
            expect(1, 0, true, true),
        ),
        "B2" => (
            "B2",
            labelled("B2", &["1", "0"], 0, vec![vec![0, 1], vec![0, 0]])?,
            expect(2, 1, true, true),
        ),
        "diamond" => ("diamond", diamond()?, expect(2, 1, false, true)),
        "chain3" => (
            "chain3",
            poset_algebra(&PosetSpec::new(
                "chain3",
                &["1", "a", "b"],
                &[("a", "1"), ("b", "a")],
                "1",
            ))?,
            expect(3, 2, true, true),
        ),
        "omega3" => ("omega3", omega(3)?, expect(7, 4, false, false)),
        "omega5" => ("omega5", omega(5)?, expect(11, 6, false, false)),
        "example5" => {
            let antichain = poset_algebra(&PosetSpec::new(
                "pq",
                &["1", "p", "q"],
                &[("p", "1"), ("q", "1")],
                "1",
            ))?;
            let b2 = build_fixture("B2")?.algebra;
            let sum = ordered_sum(&antichain, &b2)?.with_name("example5");
            ("example5", sum, expect(5, 3, false, false))
        }
        "diamond_poset" => (
            "diamond_poset",
            poset_algebra(&PosetSpec::new(
                "diamond_poset",
                &["1", "p", "q", "0"],
                &[("p", "1"), ("q", "1"), ("0", "p"), ("0", "q")],
                "1",
            ))?,
            expect(5, 3, false, false),
        ),
        "B2xB2" => {
            let b2 = build_fixture("B2")?.algebra;
            (
                "B2xB2",
                product(&b2, &b2)?.algebra,
                expect(4, 2, true, true),
            )
        }
        "diamondxB2" => {
            let d = diamond()?;
            let b2 = build_fixture("B2")?.algebra;
            (
                "diamondxB2",
                product(&d, &b2)?.algebra,
                expect(4, 2, false, true),
            )
        }
        other => return Err(Error::UnknownLabel(other.to_string())),
    };
    Ok(Fixture {
        name,
        algebra,
        expected,
    })
}

/// One named fixture algebra.
pub fn fixture(name: &str) -> Result<FiniteLAlgebra> {
    build_fixture(name).map(|f| f.algebra)
}

/// The regression corpus, every member validated.
pub fn fixtures() -> Result<Vec<Fixture>> {
    FIXTURE_NAMES.iter().map(|n| build_fixture(n)).collect()
}

/// Largest carrier the enumerator accepts.
pub const MAX_ENUMERATION_SIZE: usize = 5;

const UNSET: u8 = u8::MAX;

struct Search<'a> {
    n: usize,
    table: Vec<u8>,
    cells: Vec<(usize, usize)>,
    visit: &'a mut dyn FnMut(&[u8]),
}

impl Search<'_> {
    #[inline]
    fn get(&self, x: usize, y: usize) -> u8 {
        self.table[x * self.n + y]
    }

    /// Checks every constraint whose cells are all assigned.
    fn consistent(&self) -> bool {
        let n = self.n;
        for x in 1..n {
            for y in 1..n {
                if x == y {
                    continue;
                }
                let xy = self.get(x, y);
                if xy == 0 && self.get(y, x) == 0 {
                    return false;
                }
                if xy != 0 {
                    continue;
                }
                // x ≤ y: transitivity of the evolving order
                for z in 1..n {
                    if self.get(y, z) == 0 {
                        let xz = self.get(x, z);
                        if xz != UNSET && xz != 0 {
                            return false;
                        }
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let (xy, yx) = (self.get(x, y), self.get(y, x));
                if xy == UNSET || yx == UNSET {
                    continue;
                }
                for z in 0..n {
                    let (xz, yz) = (self.get(x, z), self.get(y, z));
                    if xz == UNSET || yz == UNSET {
                        continue;
                    }
                    let lhs = self.get(xy as usize, xz as usize);
                    let rhs = self.get(yx as usize, yz as usize);
                    if lhs != UNSET && rhs != UNSET && lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize) {
        if k == self.cells.len() {
            let table = std::mem::take(&mut self.table);
            (self.visit)(&table);
            self.table = table;
            return;
        }
        let (x, y) = self.cells[k];
        for v in 0..self.n as u8 {
            self.table[x * self.n + y] = v;
            if self.consistent() {
                self.run(k + 1);
            }
        }
        self.table[x * self.n + y] = UNSET;
    }
}

/// Lexicographically least relabelling of a flat table over all
/// permutations fixing index 0.
pub fn canonical_form(n: usize, table: &[u8]) -> Vec<u8> {
    let mut best = table.to_vec();
    for perm in (1..n).permutations(n - 1) {
        let mut map = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            map[i + 1] = p;
        }
        let mut t = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                t[map[x] * n + map[y]] = map[table[x * n + y] as usize] as u8;
            }
        }
        if t < best {
            best = t;
        }
    }
    best
}

fn enumerated_labels(n: usize) -> Vec<String> {
    std::iter::once("1".to_string())
        .chain((1..n).map(|i| ((b'a' + i as u8 - 1) as char).to_string()))
        .collect()
}

/// Streams every L-algebra table on `n` elements with the unit at index 0,
/// or one canonical representative per isomorphism class when `up_to_iso`.
pub fn for_each_algebra(
    n: usize,
    up_to_iso: bool,
    mut f: impl FnMut(FiniteLAlgebra),
) -> Result<()> {
    if n == 0 || n > MAX_ENUMERATION_SIZE {
        return Err(Error::SizeTooLarge {
            n,
            max: MAX_ENUMERATION_SIZE,
        });
    }
    let mut table = vec![UNSET; n * n];
    for i in 0..n {
        table[i] = i as u8; // 1·y = y
        table[i * n] = 0; // x·1 = 1
        table[i * n + i] = 0; // x·x = 1
    }
    let cells = (1..n)
        .flat_map(|x| (1..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let labels = enumerated_labels(n);
    let mut count = 0usize;
    let mut failure = None;
    let mut visit = |t: &[u8]| {
        if failure.is_some() || (up_to_iso && canonical_form(n, t) != t) {
            return;
        }
        let raw = RawAlgebra {
            name: format!("n{n}#{count}"),
            labels: labels.clone(),
            unit: 0,
            table: t
                .chunks(n)
                .map(|r| r.iter().map(|&v| v as usize).collect())
                .collect(),
        };
        count += 1;
        match validate(raw) {
            Ok(a) => f(a),
            Err(e) => failure = Some(e),
        }
    };
    let mut search = Search {
        n,
        table,
        cells,
        visit: &mut visit,
    };
    search.run(0);
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub fn enumerate_all(n: usize, up_to_iso: bool) -> Result<Vec<FiniteLAlgebra>> {
    let mut out = Vec::new();
    for_each_algebra(n, up_to_iso, |a| out.push(a))?;
    Ok(out)
}
