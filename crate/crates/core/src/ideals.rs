//! Ideals, their lattice, congruences and quotients.

use std::collections::{HashMap, HashSet};

use crate::algebra::{validate, FiniteLAlgebra, RawAlgebra};
use crate::error::{Error, Falsification, FalsificationKind, Result};
use crate::subset::Subset;

/// Carriers up to this size enumerate ideals by filtering every
/// unit-containing subset; larger ones saturate from principal ideals.
pub const FILTER_LIMIT: usize = 20;

/// Largest ideal lattice that [`enumerate_ideals`] will tabulate.
pub const MAX_IDEALS: usize = 1024;

/// Whether `s` contains the unit and is closed under the three ideal rules.
pub fn is_ideal(x: &FiniteLAlgebra, s: Subset) -> bool {
    if !s.contains(x.unit()) || !s.is_subset(x.carrier()) {
        return false;
    }
    s.iter().all(|a| {
        x.elements().all(|b| {
            let ab = x.op(a, b);
            (!s.contains(ab) || s.contains(b))
                && s.contains(x.op(ab, b))
                && s.contains(x.op(b, a))
                && s.contains(x.op(b, ab))
        })
    })
}

/// The least ideal containing `seed`.
pub fn generate_ideal(x: &FiniteLAlgebra, seed: Subset) -> Subset {
    generate_ideal_counting(x, seed).0
}

/// As [`generate_ideal`], also returning the number of passes until the
/// rules stopped adding elements.
pub fn generate_ideal_counting(x: &FiniteLAlgebra, seed: Subset) -> (Subset, usize) {
    let carrier = x.carrier();
    let mut ideal = (seed & carrier).with(x.unit());
    let mut passes = 0;
    loop {
        passes += 1;
        let before = ideal;
        // x ∈ I, x·y ∈ I ⇒ y ∈ I
        for b in carrier - ideal {
            if ideal.iter().any(|a| ideal.contains(x.op(a, b))) {
                ideal.insert(b);
            }
        }
        // x ∈ I ⇒ (x·y)·y ∈ I
        for a in ideal {
            for b in x.elements() {
                ideal.insert(x.op(x.op(a, b), b));
            }
        }
        // x ∈ I ⇒ y·x ∈ I, y·(x·y) ∈ I
        for a in ideal {
            for b in x.elements() {
                ideal.insert(x.op(b, a));
                ideal.insert(x.op(b, x.op(a, b)));
            }
        }
        if ideal == before {
            return (ideal, passes);
        }
    }
}

fn sort_ideals(ideals: &mut [Subset]) {
    ideals.sort_by_key(|s| (s.len(), s.bits()));
}

/// All ideals by testing every subset that contains the unit.
pub fn ideals_by_filter(x: &FiniteLAlgebra) -> Vec<Subset> {
    let others: Vec<usize> = x.elements().filter(|&e| e != x.unit()).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << others.len()) {
        let s = Subset::from_indices(
            others
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &e)| e),
        )
        .with(x.unit());
        if is_ideal(x, s) {
            out.push(s);
        }
    }
    sort_ideals(&mut out);
    out
}

/// All ideals by closing the principal ideals under joins and intersections.
pub fn ideals_by_saturation(x: &FiniteLAlgebra) -> Vec<Subset> {
    let mut known: Vec<Subset> = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |s: Subset, known: &mut Vec<Subset>| {
        if seen.insert(s) {
            known.push(s);
        }
    };
    push(Subset::singleton(x.unit()), &mut known);
    for e in x.elements() {
        push(generate_ideal(x, Subset::singleton(e)), &mut known);
    }
    let mut done = 0;
    while done < known.len() {
        let current = known[done];
        for i in 0..=done {
            let other = known[i];
            push(generate_ideal(x, current | other), &mut known);
            push(current & other, &mut known);
        }
        done += 1;
    }
    sort_ideals(&mut known);
    known
}

/// The ideals of an algebra ordered by inclusion, with meet, join and
/// residuation tables indexed by position in [`IdealLattice::ideals`].
#[derive(Debug, Clone)]
pub struct IdealLattice {
    algebra: FiniteLAlgebra,
    ideals: Vec<Subset>,
    index: HashMap<Subset, usize>,
    principal: Vec<usize>,
    meet: Vec<u32>,
    join: Vec<u32>,
    residuation: Vec<u32>,
}

/// Materializes the ideal lattice, checking the residuation formula and
/// distributivity along the way.
pub fn enumerate_ideals(x: &FiniteLAlgebra) -> Result<IdealLattice> {
    let ideals = if x.size() <= FILTER_LIMIT {
        ideals_by_filter(x)
    } else {
        ideals_by_saturation(x)
    };
    IdealLattice::from_ideals(x, ideals)
}

impl IdealLattice {
    fn from_ideals(x: &FiniteLAlgebra, ideals: Vec<Subset>) -> Result<Self> {
        let m = ideals.len();
        if m > MAX_IDEALS {
            return Err(Error::TooManyIdeals { max: MAX_IDEALS });
        }
        let index: HashMap<Subset, usize> =
            ideals.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let lookup = |s: Subset| index.get(&s).copied().ok_or(Error::NotAnIdeal(s));

        let principal = x
            .elements()
            .map(|e| lookup(generate_ideal(x, Subset::singleton(e))))
            .collect::<Result<Vec<_>>>()?;

        let mut meet = vec![0u32; m * m];
        let mut join = vec![0u32; m * m];
        let mut residuation = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                meet[i * m + j] = lookup(ideals[i] & ideals[j])? as u32;
                join[i * m + j] = lookup(generate_ideal(x, ideals[i] | ideals[j]))? as u32;
                let r = x
                    .elements()
                    .filter(|&e| (ideals[principal[e]] & ideals[i]).is_subset(ideals[j]))
                    .collect::<Subset>();
                let r = lookup(r).map_err(|_| {
                    Falsification::new(
                        FalsificationKind::ResiduationNotGreatest,
                        format!("{} is not an ideal", x.format_subset(r)),
                    )
                    .ideals([ideals[i], ideals[j], r])
                })?;
                residuation[i * m + j] = r as u32;
            }
        }
        let lattice = IdealLattice {
            algebra: x.clone(),
            ideals,
            index,
            principal,
            meet,
            join,
            residuation,
        };
        lattice.check_residuation()?;
        lattice.check_distributive()?;
        Ok(lattice)
    }

    pub fn algebra(&self) -> &FiniteLAlgebra {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn ideals(&self) -> &[Subset] {
        &self.ideals
    }

    pub fn ideal(&self, i: usize) -> Subset {
        self.ideals[i]
    }

    pub fn index_of(&self, s: Subset) -> Option<usize> {
        self.index.get(&s).copied()
    }

    /// `{1}`
    pub fn bottom(&self) -> usize {
        0
    }

    /// The whole carrier.
    pub fn top(&self) -> usize {
        self.ideals.len() - 1
    }

    /// Index of `⟨e⟩`.
    pub fn principal(&self, e: usize) -> usize {
        self.principal[e]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.ideals[i].is_subset(self.ideals[j])
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j] as usize
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j] as usize
    }

    /// `I·J`, the greatest ideal `K` with `K ∩ I ⊆ J`.
    pub fn residuation(&self, i: usize, j: usize) -> usize {
        self.residuation[i * self.len() + j] as usize
    }

    /// `I ∨ J` as the ideal generated by `I ∪ J`.
    pub fn join_via_closure(&self, i: usize, j: usize) -> Subset {
        generate_ideal(&self.algebra, self.ideals[i] | self.ideals[j])
    }

    /// `I ∨ J` as the elements congruent mod `J` to some element of `I`,
    /// cross-checked against [`IdealLattice::join_via_closure`].
    pub fn join_via_prop2(&self, i: usize, j: usize) -> Result<Subset> {
        let x = &self.algebra;
        let (a, b) = (self.ideals[i], self.ideals[j]);
        let v: Subset = x
            .elements()
            .filter(|&y| {
                a.iter()
                    .any(|w| b.contains(x.op(w, y)) && b.contains(x.op(y, w)))
            })
            .collect();
        let closure = self.join_via_closure(i, j);
        if v != closure {
            let diff = (v - closure) | (closure - v);
            return Err(Falsification::new(
                FalsificationKind::Prop2Mismatch,
                format!(
                    "join of {} and {}: congruence form {} vs closure {}",
                    x.format_subset(a),
                    x.format_subset(b),
                    x.format_subset(v),
                    x.format_subset(closure)
                ),
            )
            .ideals([a, b])
            .elements(diff)
            .into());
        }
        Ok(v)
    }

    /// `{x | ⟨x⟩ ∩ I ⊆ J}` checked against the greatest-ideal definition.
    pub fn residuation_checked(&self, i: usize, j: usize) -> Result<Subset> {
        self.check_residuation_pair(i, j)?;
        Ok(self.ideals[self.residuation(i, j)])
    }

    fn check_residuation_pair(&self, i: usize, j: usize) -> Result<(), Falsification> {
        let (a, b) = (self.ideals[i], self.ideals[j]);
        let r = self.ideals[self.residuation(i, j)];
        let fail = |msg: String, extra: Subset| {
            Falsification::new(FalsificationKind::ResiduationNotGreatest, msg).ideals([a, b, extra])
        };
        if !(r & a).is_subset(b) {
            return Err(fail("residual meets I outside J".into(), r));
        }
        for &k in &self.ideals {
            if (k & a).is_subset(b) && !k.is_subset(r) {
                return Err(fail(
                    format!(
                        "{} satisfies K ∩ I ⊆ J but is not below {}",
                        self.algebra.format_subset(k),
                        self.algebra.format_subset(r)
                    ),
                    k,
                ));
            }
        }
        Ok(())
    }

    fn check_residuation(&self) -> Result<(), Falsification> {
        for i in 0..self.len() {
            for j in 0..self.len() {
                self.check_residuation_pair(i, j)?;
            }
        }
        Ok(())
    }

    /// `(I ∨ J) ∩ K = (I ∩ K) ∨ (J ∩ K)` for every triple.
    pub fn check_distributive(&self) -> Result<(), Falsification> {
        let m = self.len();
        for i in 0..m {
            for j in 0..m {
                let ij = self.join(i, j);
                for k in 0..m {
                    let lhs = self.meet(ij, k);
                    let rhs = self.join(self.meet(i, k), self.meet(j, k));
                    if lhs != rhs {
                        return Err(Falsification::new(
                            FalsificationKind::Distributivity,
                            "(I ∨ J) ∩ K differs from (I ∩ K) ∨ (J ∩ K)",
                        )
                        .ideals([
                            self.ideals[i],
                            self.ideals[j],
                            self.ideals[k],
                        ]));
                    }
                }
            }
        }
        Ok(())
    }

    /// The lattice as an L-algebra under residuation, with the whole
    /// carrier as logical unit. Needs at most 64 ideals.
    pub fn as_l_algebra(&self) -> Result<FiniteLAlgebra> {
        let m = self.len();
        let raw = RawAlgebra {
            name: format!("J({})", self.algebra.name()),
            labels: (0..m).map(|i| format!("I{i}")).collect(),
            unit: self.top(),
            table: (0..m)
                .map(|i| (0..m).map(|j| self.residuation(i, j)).collect())
                .collect(),
        };
        validate(raw)
    }

    /// Renders ideal `i` with element labels.
    pub fn format_ideal(&self, i: usize) -> String {
        self.algebra.format_subset(self.ideals[i])
    }
}

/// Congruence modulo an ideal: `x ≡ y ⇔ x·y ∈ I and y·x ∈ I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    /// Class id per element; classes are numbered by least member.
    pub class_of: Vec<usize>,
    pub classes: Vec<Subset>,
}

impl Congruence {
    /// Normalizes an arbitrary class labelling so that classes are numbered
    /// in order of their least member.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut classes: Vec<Subset> = Vec::new();
        let mut class_of = Vec::with_capacity(labels.len());
        for (e, l) in labels.iter().enumerate() {
            let next = renumber.len();
            let c = *renumber.entry(*l).or_insert(next);
            if c == classes.len() {
                classes.push(Subset::EMPTY);
            }
            classes[c].insert(e);
            class_of.push(c);
        }
        Congruence { class_of, classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// `a ≡ b ⇒ c·a ≡ c·b and a·c ≡ b·c`; returns a failing `(a, b, c)`.
    pub fn compatibility_witness(&self, x: &FiniteLAlgebra) -> Option<(usize, usize, usize)> {
        for class in &self.classes {
            for a in *class {
                for b in *class {
                    for c in x.elements() {
                        if !self.related(x.op(c, a), x.op(c, b))
                            || !self.related(x.op(a, c), x.op(b, c))
                        {
                            return Some((a, b, c));
                        }
                    }
                }
            }
        }
        None
    }

    /// The class of the unit.
    pub fn kernel(&self, x: &FiniteLAlgebra) -> Subset {
        self.classes[self.class_of[x.unit()]]
    }
}

pub fn congruence_of(x: &FiniteLAlgebra, ideal: Subset) -> Result<Congruence> {
    if !is_ideal(x, ideal) {
        return Err(Error::NotAnIdeal(ideal));
    }
    let related = |a: usize, b: usize| ideal.contains(x.op(a, b)) && ideal.contains(x.op(b, a));
    let mut labels = vec![usize::MAX; x.size()];
    for a in x.elements() {
        if labels[a] != usize::MAX {
            continue;
        }
        for b in x.elements() {
            if related(a, b) {
                if labels[b] != usize::MAX {
                    return Err(Falsification::new(
                        FalsificationKind::CongruenceNotCompatible,
                        format!("relation mod {} is not transitive", x.format_subset(ideal)),
                    )
                    .ideals([ideal])
                    .elements([a, b])
                    .into());
                }
                labels[b] = a;
            }
        }
    }
    let cong = Congruence::from_labels(&labels);
    // every pair inside a class must be related
    for class in &cong.classes {
        for a in *class {
            for b in *class {
                if !related(a, b) {
                    return Err(Falsification::new(
                        FalsificationKind::CongruenceNotCompatible,
                        "relation is not transitive",
                    )
                    .ideals([ideal])
                    .elements([a, b])
                    .into());
                }
            }
        }
    }
    if let Some((a, b, c)) = cong.compatibility_witness(x) {
        return Err(Falsification::new(
            FalsificationKind::CongruenceNotCompatible,
            format!(
                "{} ≡ {} but multiplying by {} breaks it",
                x.label(a),
                x.label(b),
                x.label(c)
            ),
        )
        .ideals([ideal])
        .elements([a, b, c])
        .into());
    }
    if cong.kernel(x) != ideal {
        return Err(Falsification::new(
            FalsificationKind::CongruenceNotCompatible,
            "class of the unit differs from the ideal",
        )
        .ideals([ideal, cong.kernel(x)])
        .into());
    }
    Ok(cong)
}

/// `X/I` together with the projection `X → X/I`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: FiniteLAlgebra,
    pub projection: Vec<usize>,
}

impl Quotient {
    /// Preimage of a subset of the quotient.
    pub fn preimage(&self, s: Subset) -> Subset {
        self.projection
            .iter()
            .enumerate()
            .filter(|(_, &c)| s.contains(c))
            .map(|(e, _)| e)
            .collect()
    }
}

/// Kernel `{x | f(x) = 1}` of a map into `target`.
pub fn kernel(map: &[usize], target: &FiniteLAlgebra) -> Subset {
    map.iter()
        .enumerate()
        .filter(|(_, &v)| v == target.unit())
        .map(|(e, _)| e)
        .collect()
}

/// Whether `map: source → target` preserves the operation.
pub fn is_morphism(source: &FiniteLAlgebra, target: &FiniteLAlgebra, map: &[usize]) -> bool {
    source.elements().all(|a| {
        source
            .elements()
            .all(|b| map[source.op(a, b)] == target.op(map[a], map[b]))
    })
}

/// The quotient by the congruence modulo `ideal`. Each class is represented
/// by (and labelled with) its least member.
pub fn quotient(x: &FiniteLAlgebra, ideal: Subset) -> Result<Quotient> {
    let cong = congruence_of(x, ideal)?;
    let reps: Vec<usize> = cong
        .classes
        .iter()
        .map(|c| c.first().expect("nonempty class"))
        .collect();
    let mut table = vec![vec![0; reps.len()]; reps.len()];
    for a in x.elements() {
        for b in x.elements() {
            let (ca, cb) = (cong.class_of[a], cong.class_of[b]);
            let cab = cong.class_of[x.op(a, b)];
            if a == reps[ca] && b == reps[cb] {
                table[ca][cb] = cab;
            }
        }
    }
    for a in x.elements() {
        for b in x.elements() {
            let (ca, cb) = (cong.class_of[a], cong.class_of[b]);
            if table[ca][cb] != cong.class_of[x.op(a, b)] {
                return Err(Falsification::new(
                    FalsificationKind::QuotientNotWellDefined,
                    format!(
                        "product of classes of {} and {} depends on representatives",
                        x.label(a),
                        x.label(b)
                    ),
                )
                .ideals([ideal])
                .elements([a, b])
                .into());
            }
        }
    }
    let labels: Vec<String> = x.subset_labels(ideal);
    let raw = RawAlgebra {
        name: format!("{}/{{{}}}", x.name(), labels.join(",")),
        labels: reps.iter().map(|&r| x.label(r).to_string()).collect(),
        unit: cong.class_of[x.unit()],
        table,
    };
    let algebra = validate(raw)?;
    let projection = cong.class_of.clone();
    if kernel(&projection, &algebra) != ideal {
        return Err(Falsification::new(
            FalsificationKind::QuotientNotWellDefined,
            "kernel of the projection differs from the ideal",
        )
        .ideals([ideal])
        .into());
    }
    Ok(Quotient {
        algebra,
        projection,
    })
}
