//! Prime ideals and the spectral topology, prime and quasi-prime elements,
//! relative spectra, subdirect irreducibility and the map `x ↦ U_⟨x⟩`.

use itertools::Itertools;

use crate::algebra::{FiniteLAlgebra, StructureFlags};
use crate::error::{Error, Falsification, FalsificationKind, Result};
use crate::ideals::{enumerate_ideals, generate_ideal, quotient, IdealLattice};
use crate::subset::{Subset, MAX_ELEMENTS};

/// The prime ideals of an algebra with open sets `U_I = {P | I ⊄ P}`.
///
/// Opens are indexed by ideal (lattice position) and are subsets of the
/// point positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumTopology {
    points: Vec<usize>,
    opens: Vec<Subset>,
}

/// `I ⊆ P` or `I·P ⊆ P` for every ideal `I`.
pub fn is_prime_by_residuation(l: &IdealLattice, p: usize) -> bool {
    p != l.top() && (0..l.len()).all(|i| l.leq(i, p) || l.leq(l.residuation(i, p), p))
}

/// `I ∩ J ⊆ P` implies `I ⊆ P` or `J ⊆ P`.
pub fn is_prime_by_meets(l: &IdealLattice, p: usize) -> bool {
    p != l.top()
        && (0..l.len())
            .all(|i| (0..l.len()).all(|j| !l.leq(l.meet(i, j), p) || l.leq(i, p) || l.leq(j, p)))
}

/// Computes the points with both primality tests and materializes the opens.
pub fn prime_ideals(l: &IdealLattice) -> Result<SpectrumTopology> {
    let mut points = Vec::new();
    for p in 0..l.len() {
        let by_residuation = is_prime_by_residuation(l, p);
        if by_residuation != is_prime_by_meets(l, p) {
            return Err(Falsification::new(
                FalsificationKind::PrimeDefinitionMismatch,
                format!(
                    "{} is prime by residuation: {by_residuation}, by meets: {}",
                    l.format_ideal(p),
                    !by_residuation
                ),
            )
            .ideals([l.ideal(p)])
            .into());
        }
        if by_residuation {
            points.push(p);
        }
    }
    if points.len() > MAX_ELEMENTS {
        return Err(Error::TooLarge {
            size: points.len(),
            max: MAX_ELEMENTS,
        });
    }
    let opens = (0..l.len())
        .map(|i| {
            points
                .iter()
                .enumerate()
                .filter(|(_, &p)| !l.leq(i, p))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    Ok(SpectrumTopology { points, opens })
}

impl SpectrumTopology {
    /// Lattice positions of the prime ideals.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point position of the ideal at lattice position `i`, if prime.
    pub fn point_of(&self, i: usize) -> Option<usize> {
        self.points.iter().position(|&p| p == i)
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.points.len())
    }

    /// `U_I`
    pub fn open(&self, i: usize) -> Subset {
        self.opens[i]
    }

    /// `A_I`, the complement of `U_I`.
    pub fn closed(&self, i: usize) -> Subset {
        self.all() - self.opens[i]
    }

    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    /// Smallest closed set containing point `k`.
    pub fn closure_of_point(&self, k: usize) -> Subset {
        (0..self.opens.len())
            .map(|i| self.closed(i))
            .filter(|c| c.contains(k))
            .fold(self.all(), |acc, c| acc & c)
    }

    /// Distinct closed sets, ascending by bits.
    pub fn closed_sets(&self) -> Vec<Subset> {
        (0..self.opens.len())
            .map(|i| self.closed(i))
            .sorted()
            .dedup()
            .collect()
    }

    /// Whether a closed set is nonempty and not covered by two closed sets
    /// without being inside one of them.
    pub fn is_irreducible(&self, a: Subset) -> bool {
        if a.is_empty() {
            return false;
        }
        let closed = self.closed_sets();
        closed.iter().all(|&b| {
            closed
                .iter()
                .all(|&c| !a.is_subset(b | c) || a.is_subset(b) || a.is_subset(c))
        })
    }
}

/// Minimal number of generators found for one ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorCount {
    pub ideal: usize,
    pub count: usize,
    /// Whether every smaller generating set was ruled out.
    pub exact: bool,
}

/// Largest generating-set size searched exhaustively.
const EXHAUSTIVE_GENERATORS: usize = 3;

/// Greedy minimization from the ideal itself, then an exhaustive search
/// over subsets of size at most three.
pub fn minimal_generators(l: &IdealLattice, i: usize) -> GeneratorCount {
    let x = l.algebra();
    let target = l.ideal(i);
    let mut gens = target;
    for e in target.iter().collect::<Vec<_>>().into_iter().rev() {
        if generate_ideal(x, gens.without(e)) == target {
            gens.remove(e);
        }
    }
    let greedy = gens.len();
    let members: Vec<usize> = target.iter().collect();
    for k in 0..greedy.min(EXHAUSTIVE_GENERATORS + 1) {
        let found = members
            .iter()
            .copied()
            .combinations(k)
            .any(|c| generate_ideal(x, c.into_iter().collect()) == target);
        if found {
            return GeneratorCount {
                ideal: i,
                count: k,
                exact: true,
            };
        }
    }
    GeneratorCount {
        ideal: i,
        count: greedy,
        exact: greedy <= EXHAUSTIVE_GENERATORS + 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyReport {
    pub points: usize,
    pub t0: bool,
    /// Two point positions no open set separates.
    pub t0_witness: Option<(usize, usize)>,
    /// Nonempty irreducible closed sets with their generic points.
    pub generic_points: Vec<(Subset, Vec<usize>)>,
    pub sober: bool,
    /// Closure of each point equals the set of primes containing it.
    pub closure_is_specialization: bool,
    pub open_map_injective: bool,
    /// `U_{I∩J} = U_I ∩ U_J`, `U_{I∨J} = U_I ∪ U_J`, `U_{1} = ∅`, `U_X` = all.
    pub frame_homomorphism: bool,
    pub generators: Vec<GeneratorCount>,
    pub quasi_compact: bool,
    pub generalized_spectral: bool,
    pub notes: Vec<String>,
}

impl TopologyReport {
    pub fn ok(&self) -> bool {
        self.t0
            && self.sober
            && self.closure_is_specialization
            && self.open_map_injective
            && self.frame_homomorphism
            && self.quasi_compact
            && self.generalized_spectral
    }
}

pub fn topology_report(l: &IdealLattice, s: &SpectrumTopology) -> TopologyReport {
    let n = s.len();
    let mut t0_witness = None;
    'outer: for a in 0..n {
        for b in a + 1..n {
            let separated = s.opens().iter().any(|u| u.contains(a) != u.contains(b));
            if !separated {
                t0_witness = Some((a, b));
                break 'outer;
            }
        }
    }

    let closures: Vec<Subset> = (0..n).map(|k| s.closure_of_point(k)).collect();
    let mut generic_points = Vec::new();
    let mut sober = true;
    for a in s.closed_sets() {
        if !s.is_irreducible(a) {
            continue;
        }
        let generic: Vec<usize> = a.iter().filter(|&k| closures[k] == a).collect();
        if generic.len() != 1 {
            sober = false;
        }
        generic_points.push((a, generic));
    }
    if closures.iter().any(|&c| !s.is_irreducible(c)) {
        sober = false;
    }

    let closure_is_specialization = (0..n).all(|k| {
        let p = l.ideal(s.points()[k]);
        let above: Subset = (0..n)
            .filter(|&j| p.is_subset(l.ideal(s.points()[j])))
            .collect();
        above == closures[k]
    });

    let open_map_injective = s.opens().iter().all_unique();
    let m = l.len();
    let frame_homomorphism = s.open(l.bottom()).is_empty()
        && s.open(l.top()) == s.all()
        && (0..m).all(|i| {
            (0..m).all(|j| {
                s.open(l.meet(i, j)) == s.open(i) & s.open(j)
                    && s.open(l.join(i, j)) == s.open(i) | s.open(j)
            })
        });

    let generators: Vec<GeneratorCount> = (0..m).map(|i| minimal_generators(l, i)).collect();
    let notes = vec![
        "finite space: every open set is quasi-compact and every ideal is finitely generated"
            .to_string(),
        "finite space: intersections of quasi-compact opens are quasi-compact; a failure needs an infinite algebra"
            .to_string(),
    ];
    TopologyReport {
        points: n,
        t0: t0_witness.is_none(),
        t0_witness,
        generic_points,
        sober,
        closure_is_specialization,
        open_map_injective,
        frame_homomorphism,
        generators,
        quasi_compact: true,
        generalized_spectral: true,
        notes,
    }
}

/// `{p < 1 | ∀x: x ≤ p or x·p ≤ p}`.
pub fn prime_elements(x: &FiniteLAlgebra) -> Subset {
    x.elements()
        .filter(|&p| p != x.unit())
        .filter(|&p| x.elements().all(|e| x.leq(e, p) || x.leq(x.op(e, p), p)))
        .collect()
}

pub fn is_quasi_prime(l: &IdealLattice, q: usize) -> bool {
    let m = l.len();
    q != l.algebra().unit()
        && (0..m).all(|i| {
            (0..m).all(|j| {
                !l.ideal(l.join(i, j)).contains(q)
                    || l.ideal(i).contains(q)
                    || l.ideal(j).contains(q)
            })
        })
}

/// `{q < 1 | q ∈ I ∨ J ⇒ q ∈ I ∪ J}`, checked to contain every prime element.
pub fn quasi_prime_elements(l: &IdealLattice) -> Result<Subset> {
    let x = l.algebra();
    let qp: Subset = x.elements().filter(|&q| is_quasi_prime(l, q)).collect();
    let primes = prime_elements(x);
    if !primes.is_subset(qp) {
        return Err(Falsification::new(
            FalsificationKind::PrimeNotQuasiPrime,
            format!(
                "prime elements {} are not quasi-prime",
                x.format_subset(primes - qp)
            ),
        )
        .elements(primes - qp)
        .into());
    }
    Ok(qp)
}

/// The ideals maximal among those avoiding an element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub element: usize,
    /// Lattice positions, ascending.
    pub maximal: Vec<usize>,
    pub unique: bool,
}

pub fn attach_prime_ideal(l: &IdealLattice, s: &SpectrumTopology, e: usize) -> Result<Attachment> {
    let x = l.algebra();
    if e == x.unit() {
        return Err(Error::Precondition("the unit lies in every ideal".into()));
    }
    let avoiding: Vec<usize> = (0..l.len()).filter(|&i| !l.ideal(i).contains(e)).collect();
    let maximal: Vec<usize> = avoiding
        .iter()
        .copied()
        .filter(|&i| avoiding.iter().all(|&j| j == i || !l.leq(i, j)))
        .collect();
    for &p in &maximal {
        if s.point_of(p).is_none() {
            return Err(Falsification::new(
                FalsificationKind::AttachmentNotPrime,
                format!(
                    "{} is maximal avoiding {} but not prime",
                    l.format_ideal(p),
                    x.label(e)
                ),
            )
            .elements([e])
            .ideals([l.ideal(p)])
            .into());
        }
    }
    let unique = maximal.len() == 1;
    if !unique && is_quasi_prime(l, e) {
        return Err(Falsification::new(
            FalsificationKind::NonUniqueAttachment,
            format!(
                "quasi-prime {} has {} maximal avoiding ideals",
                x.label(e),
                maximal.len()
            ),
        )
        .elements([e])
        .ideals(maximal.iter().map(|&p| l.ideal(p)))
        .into());
    }
    Ok(Attachment {
        element: e,
        maximal,
        unique,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeElementReport {
    pub primes: Subset,
    pub quasi_primes: Subset,
    pub attachments: Vec<Attachment>,
}

impl PrimeElementReport {
    /// `P_x` for a quasi-prime `x`.
    pub fn attached(&self, e: usize) -> Option<usize> {
        self.attachments
            .iter()
            .find(|a| a.element == e && a.unique)
            .map(|a| a.maximal[0])
    }
}

pub fn prime_element_report(l: &IdealLattice, s: &SpectrumTopology) -> Result<PrimeElementReport> {
    let x = l.algebra();
    let quasi_primes = quasi_prime_elements(l)?;
    let attachments = x
        .elements()
        .filter(|&e| e != x.unit())
        .map(|e| attach_prime_ideal(l, s, e))
        .collect::<Result<Vec<_>>>()?;
    Ok(PrimeElementReport {
        primes: prime_elements(x),
        quasi_primes,
        attachments,
    })
}

/// No two ideals other than `{1}` meet in `{1}`.
pub fn subdirectly_irreducible(l: &IdealLattice) -> bool {
    let nontrivial: Vec<usize> = (0..l.len()).filter(|&i| i != l.bottom()).collect();
    nontrivial
        .iter()
        .all(|&i| nontrivial.iter().all(|&j| l.meet(i, j) != l.bottom()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop6Row {
    pub ideal: usize,
    pub prime: bool,
    pub quotient_irreducible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop6Report {
    pub rows: Vec<Prop6Row>,
}

impl Prop6Report {
    pub fn mismatches(&self) -> impl Iterator<Item = &Prop6Row> {
        self.rows
            .iter()
            .filter(|r| r.prime != r.quotient_irreducible)
    }
}

/// Compares primality of every proper ideal with subdirect irreducibility
/// of the quotient by it.
pub fn prop6_oracle(l: &IdealLattice, s: &SpectrumTopology) -> Result<Prop6Report> {
    let x = l.algebra();
    let mut rows = Vec::new();
    for i in 0..l.len() {
        if i == l.top() {
            continue;
        }
        let q = quotient(x, l.ideal(i))?;
        let lq = enumerate_ideals(&q.algebra)?;
        rows.push(Prop6Row {
            ideal: i,
            prime: s.point_of(i).is_some(),
            quotient_irreducible: subdirectly_irreducible(&lq),
        });
    }
    Ok(Prop6Report { rows })
}

/// Counts from the open/closed decomposition of the spectrum along one ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeSpectrum {
    pub ideal: usize,
    /// `|Spec I|`
    pub sub_points: usize,
    /// `|U_I|`
    pub open_points: usize,
    /// `|Spec X/I|`
    pub quotient_points: usize,
    /// `|A_I|`
    pub closed_points: usize,
}

fn bijection_failure(msg: String, ideals: impl IntoIterator<Item = Subset>) -> Error {
    Falsification::new(FalsificationKind::BijectionFailure, msg)
        .ideals(ideals)
        .into()
}

/// Checks `P ↦ I·P` and `Q ↦ Q ∩ I` are inverse bijections between
/// `Spec I` and `U_I`, and that preimages under `X → X/I` identify
/// `Spec X/I` with `A_I`.
pub fn relative_spectrum(
    l: &IdealLattice,
    s: &SpectrumTopology,
    i: usize,
) -> Result<RelativeSpectrum> {
    let x = l.algebra();
    let ideal = l.ideal(i);
    let members: Vec<usize> = ideal.iter().collect();
    let sub = x.subalgebra(ideal, format!("{}|{}", x.name(), i))?;
    let lsub = enumerate_ideals(&sub)?;
    let ssub = prime_ideals(&lsub)?;
    let lift = |t: Subset| -> Subset { t.iter().map(|k| members[k]).collect() };
    let lower = |t: Subset| -> Subset {
        members
            .iter()
            .enumerate()
            .filter(|(_, &e)| t.contains(e))
            .map(|(k, _)| k)
            .collect()
    };

    let in_open: Vec<usize> = s
        .points()
        .iter()
        .copied()
        .filter(|&q| !l.leq(i, q))
        .collect();
    let mut images = Vec::new();
    for &pi in ssub.points() {
        let px = lift(lsub.ideal(pi));
        let Some(pxi) = l.index_of(px) else {
            return Err(bijection_failure(
                format!(
                    "prime {} of the subalgebra is not an ideal of X",
                    x.format_subset(px)
                ),
                [ideal, px],
            ));
        };
        let k = l.residuation(i, pxi);
        if !in_open.contains(&k) {
            return Err(bijection_failure(
                format!("I·P = {} is not a prime in U_I", l.format_ideal(k)),
                [ideal, px, l.ideal(k)],
            ));
        }
        if l.ideal(k) & ideal != px {
            return Err(bijection_failure(
                format!("(I·P) ∩ I differs from P = {}", x.format_subset(px)),
                [ideal, px, l.ideal(k)],
            ));
        }
        images.push(k);
    }
    for &q in &in_open {
        let meet = l.ideal(q) & ideal;
        let is_point = lsub
            .index_of(lower(meet))
            .and_then(|k| ssub.point_of(k))
            .is_some();
        if !is_point {
            return Err(bijection_failure(
                format!("Q ∩ I = {} is not prime in I", x.format_subset(meet)),
                [ideal, l.ideal(q)],
            ));
        }
        let back = l.index_of(meet).map(|mi| l.residuation(i, mi));
        if back != Some(q) {
            return Err(bijection_failure(
                format!("I·(Q ∩ I) differs from Q = {}", l.format_ideal(q)),
                [ideal, l.ideal(q)],
            ));
        }
    }
    images.sort_unstable();
    if images != in_open {
        return Err(bijection_failure(
            "P ↦ I·P does not hit U_I exactly once per point".into(),
            [ideal],
        ));
    }

    let q = quotient(x, ideal)?;
    let lq = enumerate_ideals(&q.algebra)?;
    let sq = prime_ideals(&lq)?;
    let in_closed: Vec<usize> = s
        .points()
        .iter()
        .copied()
        .filter(|&p| l.leq(i, p))
        .collect();
    let mut preimages = Vec::new();
    for &p in sq.points() {
        let pre = q.preimage(lq.ideal(p));
        match l.index_of(pre) {
            Some(k) if in_closed.contains(&k) => preimages.push(k),
            _ => {
                return Err(bijection_failure(
                    format!(
                        "preimage {} of a prime of X/I is not in A_I",
                        x.format_subset(pre)
                    ),
                    [ideal, pre],
                ))
            }
        }
    }
    preimages.sort_unstable();
    if preimages != in_closed {
        return Err(bijection_failure(
            "Spec X/I does not match A_I".into(),
            [ideal],
        ));
    }

    Ok(RelativeSpectrum {
        ideal: i,
        sub_points: ssub.len(),
        open_points: in_open.len(),
        quotient_points: sq.len(),
        closed_points: in_closed.len(),
    })
}

/// The antitone map `x ↦ U_⟨x⟩` from the algebra to the open sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Map17Report {
    pub images: Vec<Subset>,
    pub antitone: bool,
    pub injective: bool,
    pub surjective: bool,
    pub meet_closed: bool,
    pub brouwerian: bool,
    /// `⟨x⟩ ∨ ⟨y⟩ = ⟨x ∧ y⟩` for all pairs; `None` unless meet-closed.
    pub principal_joins: Option<bool>,
}

impl Map17Report {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }

    /// On a meet-closed algebra: surjective, finitely generated ideals
    /// principal, and bijective exactly when Brouwerian.
    pub fn consistent(&self) -> bool {
        self.antitone
            && (!self.meet_closed
                || (self.surjective
                    && self.principal_joins == Some(true)
                    && self.bijective() == self.brouwerian))
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.meet_closed {
            parts.push("not meet-closed");
        }
        parts.push(if self.injective {
            "injective"
        } else {
            "not injective"
        });
        if !self.surjective {
            parts.push("not surjective");
        }
        parts.push(if self.brouwerian {
            "Brouwerian"
        } else {
            "not Brouwerian"
        });
        parts.join(", ")
    }
}

pub fn map17(l: &IdealLattice, s: &SpectrumTopology, flags: &StructureFlags) -> Map17Report {
    let x = l.algebra();
    let images: Vec<Subset> = x.elements().map(|e| s.open(l.principal(e))).collect();
    let antitone = x.elements().all(|a| {
        x.order()
            .up(a)
            .iter()
            .all(|b| images[b].is_subset(images[a]))
    });
    let principal: Vec<usize> = x.elements().map(|e| l.principal(e)).collect();
    let surjective = (0..l.len()).all(|i| principal.contains(&i));
    let injective = principal.iter().all_unique();
    let principal_joins = flags.meet_closed.then(|| {
        x.elements().all(|a| {
            x.elements().all(|b| {
                let m = x.meet(a, b).expect("meet-closed");
                l.join(principal[a], principal[b]) == principal[m]
            })
        })
    });
    Map17Report {
        images,
        antitone,
        injective,
        surjective,
        meet_closed: flags.meet_closed,
        brouwerian: flags.brouwerian,
        principal_joins,
    }
}

/// Every ideal is the intersection of the primes containing it.
pub fn spatiality_check(l: &IdealLattice, s: &SpectrumTopology) -> Result<bool> {
    let x = l.algebra();
    for i in 0..l.len() {
        let hull = s
            .points()
            .iter()
            .filter(|&&p| l.leq(i, p))
            .fold(x.carrier(), |acc, &p| acc & l.ideal(p));
        if hull != l.ideal(i) {
            return Err(Falsification::new(
                FalsificationKind::SpatialityFailure,
                format!(
                    "{} is not the intersection of the primes above it ({})",
                    l.format_ideal(i),
                    x.format_subset(hull)
                ),
            )
            .ideals([l.ideal(i), hull])
            .into());
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{fixture, fixture_names};

    fn setup(name: &str) -> (IdealLattice, SpectrumTopology) {
        let x = fixture(name).unwrap();
        let l = enumerate_ideals(&x).unwrap();
        let s = prime_ideals(&l).unwrap();
        (l, s)
    }

    fn ids(x: &FiniteLAlgebra, labels: &[&str]) -> Subset {
        labels.iter().map(|l| x.index_of(l).unwrap()).collect()
    }

    fn point_sets(l: &IdealLattice, s: &SpectrumTopology) -> Vec<Subset> {
        s.points().iter().map(|&p| l.ideal(p)).collect()
    }

    #[test]
    fn spectra_of_small_fixtures() {
        let (l, s) = setup("B2");
        assert_eq!(point_sets(&l, &s), vec![ids(l.algebra(), &["1"])]);
        let (l, s) = setup("diamond");
        assert_eq!(point_sets(&l, &s), vec![ids(l.algebra(), &["1"])]);
        let (l, s) = setup("B2xB2");
        let x = l.algebra();
        let mut pts = point_sets(&l, &s);
        pts.sort();
        let mut expected = vec![ids(x, &["(1,1)", "(0,1)"]), ids(x, &["(1,1)", "(1,0)"])];
        expected.sort();
        assert_eq!(pts, expected);
        let (_, s) = setup("one");
        assert!(s.is_empty());
    }

    #[test]
    fn fixture_spectrum_sizes() {
        for f in crate::constructions::fixtures().unwrap() {
            let (_, s) = setup(f.name);
            assert_eq!(Some(s.len()), f.expected.spectrum, "{}", f.name);
        }
    }

    #[test]
    fn topology_of_fixtures() {
        for name in fixture_names() {
            let (l, s) = setup(name);
            let r = topology_report(&l, &s);
            assert!(r.ok(), "{name}: {r:?}");
            assert!(r.generators.iter().all(|g| g.exact), "{name}");
        }
        let (l, s) = setup("B2xB2");
        let r = topology_report(&l, &s);
        // two closed points
        assert_eq!(r.points, 2);
        for k in 0..2 {
            assert_eq!(s.closure_of_point(k), Subset::singleton(k));
        }
        assert_eq!(r.generic_points.len(), 2);
        let (l, s) = setup("one");
        let r = topology_report(&l, &s);
        assert!(r.t0 && r.sober && r.generic_points.is_empty());
    }

    #[test]
    fn generator_counts() {
        let (l, s) = setup("diamond");
        let _ = s;
        assert_eq!(minimal_generators(&l, l.top()).count, 1);
        assert_eq!(minimal_generators(&l, l.bottom()).count, 0);
        let (l, _) = setup("example5");
        let x = l.algebra();
        let pq = l.index_of(x.carrier()).unwrap();
        // ⟨p⟩ and ⟨q⟩ are proper, so the top needs both
        assert_eq!(minimal_generators(&l, pq).count, 2);
    }

    #[test]
    fn prime_element_sets() {
        let d = fixture("diamond").unwrap();
        let primes = prime_elements(&d);
        assert!(primes.contains(d.index_of("p").unwrap()));
        assert!(primes.contains(d.index_of("q").unwrap()));
        // p·0 = q·0 = 0 makes 0 prime as well
        assert_eq!(primes, ids(&d, &["p", "q", "0"]));

        let b = fixture("B2").unwrap();
        assert_eq!(prime_elements(&b), ids(&b, &["0"]));

        for name in ["chain3", "omega3", "omega5", "diamond_poset"] {
            let x = fixture(name).unwrap();
            assert_eq!(prime_elements(&x), x.carrier().without(x.unit()), "{name}");
        }
    }

    #[test]
    fn quasi_primes() {
        let (l, _) = setup("B2");
        assert_eq!(quasi_prime_elements(&l).unwrap(), ids(l.algebra(), &["0"]));
        let (l, _) = setup("diamond");
        assert_eq!(
            quasi_prime_elements(&l).unwrap(),
            ids(l.algebra(), &["p", "q", "0"])
        );
        let (l, _) = setup("chain3");
        let x = l.algebra();
        assert_eq!(
            quasi_prime_elements(&l).unwrap(),
            x.carrier().without(x.unit())
        );
    }

    #[test]
    fn attachments() {
        let (l, s) = setup("diamond");
        let x = l.algebra();
        for e in ["p", "q"] {
            let a = attach_prime_ideal(&l, &s, x.index_of(e).unwrap()).unwrap();
            assert!(a.unique);
            assert_eq!(l.ideal(a.maximal[0]), ids(x, &["1"]));
        }
        assert!(attach_prime_ideal(&l, &s, x.unit()).is_err());

        let (l, s) = setup("B2");
        let a = attach_prime_ideal(&l, &s, 1).unwrap();
        assert_eq!(l.ideal(a.maximal[0]), ids(l.algebra(), &["1"]));

        let (l, s) = setup("B2xB2");
        let x = l.algebra();
        let a = attach_prime_ideal(&l, &s, x.index_of("(0,1)").unwrap()).unwrap();
        assert_eq!(a.maximal.len(), 1);
        assert_eq!(l.ideal(a.maximal[0]), ids(x, &["(1,1)", "(1,0)"]));
    }

    #[test]
    fn irreducibility() {
        let (l, _) = setup("B2");
        assert!(subdirectly_irreducible(&l));
        let (l, _) = setup("B2xB2");
        assert!(!subdirectly_irreducible(&l));
        let (l, _) = setup("one");
        assert!(subdirectly_irreducible(&l));
    }

    #[test]
    fn prop6_on_fixtures() {
        for name in fixture_names() {
            let (l, s) = setup(name);
            let r = prop6_oracle(&l, &s).unwrap();
            assert_eq!(r.mismatches().count(), 0, "{name}");
        }
        let (l, s) = setup("B2xB2");
        let r = prop6_oracle(&l, &s).unwrap();
        let bottom = r.rows.iter().find(|r| r.ideal == l.bottom()).unwrap();
        assert!(!bottom.prime && !bottom.quotient_irreducible);
        let (l, s) = setup("diamond");
        let r = prop6_oracle(&l, &s).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(r.rows[0].prime && r.rows[0].quotient_irreducible);
    }

    #[test]
    fn relative_spectra() {
        for name in fixture_names() {
            let (l, s) = setup(name);
            for i in 0..l.len() {
                let r = relative_spectrum(&l, &s, i).unwrap();
                assert_eq!(r.sub_points + r.quotient_points, s.len(), "{name}");
            }
            let top = relative_spectrum(&l, &s, l.top()).unwrap();
            assert_eq!(top.sub_points, s.len());
            let bottom = relative_spectrum(&l, &s, l.bottom()).unwrap();
            assert_eq!((bottom.sub_points, bottom.open_points), (0, 0));
        }
        let (l, s) = setup("B2xB2");
        let x = l.algebra();
        let i = l.index_of(ids(x, &["(1,1)", "(0,1)"])).unwrap();
        let r = relative_spectrum(&l, &s, i).unwrap();
        assert_eq!((r.sub_points, r.open_points), (1, 1));
        let open_point = s.open(i).first().unwrap();
        assert_eq!(l.ideal(s.points()[open_point]), ids(x, &["(1,1)", "(1,0)"]));
    }

    #[test]
    fn map17_examples() {
        let (l, s) = setup("B2");
        let r = map17(&l, &s, &l.algebra().structure_flags());
        assert!(r.bijective() && r.consistent());

        let (l, s) = setup("diamond");
        let x = l.algebra();
        let r = map17(&l, &s, &x.structure_flags());
        assert!(r.surjective && !r.injective && r.consistent());
        let [p, q] = ["p", "q"].map(|e| x.index_of(e).unwrap());
        assert_eq!(r.images[p], s.all());
        assert_eq!(r.images[q], s.all());
        assert_eq!(r.summary(), "not injective, not Brouwerian");

        let (l, s) = setup("chain3");
        let r = map17(&l, &s, &l.algebra().structure_flags());
        assert!(r.bijective() && r.brouwerian && r.consistent());
    }

    #[test]
    fn spatial_fixtures() {
        for name in fixture_names() {
            let (l, s) = setup(name);
            assert!(spatiality_check(&l, &s).unwrap(), "{name}");
        }
    }
}
