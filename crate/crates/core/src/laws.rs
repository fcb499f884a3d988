//! The law harness: a static table of checks run over corpora of algebras.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{derive_order, FiniteLAlgebra, StructureFlags};
use crate::constructions::{fixture, product};
use crate::error::{Error, Falsification, FalsificationKind, Result};
use crate::ideals::{
    congruence_of, enumerate_ideals, is_morphism, kernel, quotient, Congruence, IdealLattice,
};
use crate::io::AlgebraDocument;
use crate::spectrum::{
    is_prime_by_meets, is_prime_by_residuation, map17, prime_element_report, prime_elements,
    prime_ideals, prop6_oracle, quasi_prime_elements, relative_spectrum, spatiality_check,
    topology_report, SpectrumTopology,
};
use crate::subset::Subset;

/// Everything a law needs about one algebra, computed once.
pub struct Analysis {
    pub algebra: FiniteLAlgebra,
    pub lattice: IdealLattice,
    pub spectrum: SpectrumTopology,
    pub flags: StructureFlags,
}

impl Analysis {
    pub fn new(x: &FiniteLAlgebra) -> Result<Self> {
        let lattice = enumerate_ideals(x)?;
        let spectrum = prime_ideals(&lattice)?;
        Ok(Analysis {
            algebra: x.clone(),
            lattice,
            spectrum,
            flags: x.structure_flags(),
        })
    }
}

/// `Ok(detail)` or the failing instance.
pub type Check = std::result::Result<String, Falsification>;

pub struct Law {
    pub id: &'static str,
    pub description: &'static str,
    pub check: fn(&Analysis) -> Check,
}

impl std::fmt::Debug for Law {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Law").field("id", &self.id).finish()
    }
}

pub static LAWS: &[Law] = &[
    Law {
        id: "order.sigma",
        description: "the derived order is a partial order and every σ_y: ↓y → X is injective",
        check: order_sigma,
    },
    Law {
        id: "partial-product.adjunction",
        description: "a defined partial product z = xy satisfies z ≤ c ⇔ x ≤ y·c",
        check: partial_product_adjunction,
    },
    Law {
        id: "brouwerian.identities",
        description: "in a Brouwerian semilattice (a∧b)·c = (a·b)·(a·c) and a·(b∧c) = (a·b)∧(a·c)",
        check: brouwerian_identities,
    },
    Law {
        id: "thm3.distributivity",
        description: "the ideal lattice is distributive",
        check: distributivity,
    },
    Law {
        id: "residuation.greatest",
        description: "I·J = {x | ⟨x⟩ ∩ I ⊆ J} is the greatest K with K ∩ I ⊆ J",
        check: residuation,
    },
    Law {
        id: "prop2.join",
        description: "the join of ideals computed by closure equals its congruence description",
        check: prop2_join,
    },
    Law {
        id: "ideal.congruence.bijection",
        description: "ideals correspond to congruences with L-algebra quotients, each projection a morphism with kernel I",
        check: ideal_congruence,
    },
    Law {
        id: "ideal.lattice.is.L-algebra",
        description: "the ideal lattice under I·J is a Brouwerian L-algebra whose meet is intersection",
        check: lattice_is_l_algebra,
    },
    Law {
        id: "prop3.sober",
        description: "Spec X is T0 and sober and I ↦ U_I is a bijection onto the open sets",
        check: sober,
    },
    Law {
        id: "spatial.locale",
        description: "every ideal is the intersection of the primes above it and I ↦ U_I is a frame map",
        check: spatial,
    },
    Law {
        id: "prop6.iff",
        description: "P is prime iff X/P is subdirectly irreducible; both primality tests agree",
        check: prop6,
    },
    Law {
        id: "thm4.bijection",
        description: "Spec I ↔ U_I and Spec X/I ↔ A_I for every ideal I",
        check: thm4,
    },
    Law {
        id: "thm4.interval",
        description: "primes of the interval [{1}, I] of J(X) correspond to U_I via P ↦ I·P and Q ↦ Q∩I",
        check: thm4_interval,
    },
    Law {
        id: "spec.product",
        description: "J(X×Y) = J(X)×J(Y) and Spec(X×Y) = Spec X ⊔ Spec Y for Y = B2 and Y = X",
        check: spec_product,
    },
    Law {
        id: "prime.subset.quasiprime",
        description: "every prime element is quasi-prime",
        check: prime_subset_quasiprime,
    },
    Law {
        id: "attachment.unique",
        description: "x ↦ P_x lands in the spectrum and is single-valued on quasi-prime elements",
        check: attachment,
    },
    Law {
        id: "eq20.principal",
        description: "on a ∧-closed algebra every ideal is principal and ⟨x⟩ ∨ ⟨y⟩ = ⟨x∧y⟩",
        check: principal,
    },
    Law {
        id: "map17.iff-brouwerian",
        description: "x ↦ U_⟨x⟩ is antitone, onto when ∧-closed, and bijective exactly when Brouwerian",
        check: map17_law,
    },
];

pub fn law(id: &str) -> Option<&'static Law> {
    LAWS.iter().find(|l| l.id == id)
}

fn violation(message: impl Into<String>) -> Falsification {
    Falsification::new(FalsificationKind::LawViolation, message)
}

/// Any error becomes a failing instance.
pub fn as_falsification(e: Error) -> Falsification {
    match e {
        Error::Falsified(f) => f,
        other => Falsification::new(FalsificationKind::Unexpected, other.to_string()),
    }
}

fn order_sigma(a: &Analysis) -> Check {
    let x = &a.algebra;
    let order = derive_order(x).map_err(as_falsification)?;
    if &order != x.order() {
        return Err(violation("recomputed order differs"));
    }
    let injective = |y: usize| {
        let images: Subset = x.order().down(y).iter().map(|z| x.op(y, z)).collect();
        images.len() == x.order().down(y).len()
    };
    if let Some(y) = x.elements().find(|&y| !injective(y)) {
        return Err(Falsification::new(
            FalsificationKind::NonUniqueProduct,
            format!("σ_{} is not injective on ↓{}", x.label(y), x.label(y)),
        )
        .elements([y]));
    }
    Ok(String::new())
}

fn partial_product_adjunction(a: &Analysis) -> Check {
    let x = &a.algebra;
    let mut defined = 0;
    for p in x.elements() {
        for q in x.elements() {
            let Some(z) = x.partial_product(p, q).map_err(as_falsification)? else {
                continue;
            };
            defined += 1;
            if !x.leq(z, q) || x.op(q, z) != p {
                return Err(violation("partial product is not a solution").elements([p, q, z]));
            }
            for c in x.elements() {
                if x.leq(z, c) != x.leq(p, x.op(q, c)) {
                    return Err(violation(format!(
                        "{}{} ≤ {} does not match {} ≤ {}·{}",
                        x.label(p),
                        x.label(q),
                        x.label(c),
                        x.label(p),
                        x.label(q),
                        x.label(c)
                    ))
                    .elements([p, q, c]));
                }
            }
        }
    }
    Ok(format!("{defined} defined"))
}

fn brouwerian_identities(a: &Analysis) -> Check {
    let x = &a.algebra;
    if !a.flags.brouwerian {
        return Ok("not Brouwerian".into());
    }
    if !a.flags.meet_closed {
        return Err(violation("Brouwerian but not ∧-closed"));
    }
    let meet = |p, q| x.meet(p, q).expect("meet-closed");
    for p in x.elements() {
        for q in x.elements() {
            for r in x.elements() {
                if x.op(meet(p, q), r) != x.op(x.op(p, q), x.op(p, r))
                    || x.op(p, meet(q, r)) != meet(x.op(p, q), x.op(p, r))
                {
                    return Err(violation("Brouwerian identity fails").elements([p, q, r]));
                }
            }
        }
    }
    Ok("Brouwerian".into())
}

fn distributivity(a: &Analysis) -> Check {
    a.lattice.check_distributive()?;
    Ok(format!("{} ideals", a.lattice.len()))
}

fn residuation(a: &Analysis) -> Check {
    let l = &a.lattice;
    for i in 0..l.len() {
        for j in 0..l.len() {
            l.residuation_checked(i, j).map_err(as_falsification)?;
        }
    }
    Ok(String::new())
}

fn prop2_join(a: &Analysis) -> Check {
    let l = &a.lattice;
    for i in 0..l.len() {
        for j in i..l.len() {
            let closure = l.join_via_closure(i, j);
            let via = l.join_via_prop2(i, j).map_err(as_falsification)?;
            if closure != via || closure != l.ideal(l.join(i, j)) {
                return Err(Falsification::new(
                    FalsificationKind::Prop2Mismatch,
                    format!(
                        "closure {} vs {}",
                        l.algebra().format_subset(closure),
                        l.algebra().format_subset(via)
                    ),
                )
                .ideals([l.ideal(i), l.ideal(j)]));
            }
        }
    }
    Ok(String::new())
}

/// Largest carrier for which every set partition is tried.
pub const PARTITION_LIMIT: usize = 7;

/// Calls `f` with every set partition of `0..n` as a restricted growth string.
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    fn go(labels: &mut Vec<usize>, n: usize, max: usize, f: &mut dyn FnMut(&[usize])) {
        if labels.len() == n {
            f(labels);
            return;
        }
        for c in 0..=max + 1 {
            labels.push(c);
            go(labels, n, max.max(c), f);
            labels.pop();
        }
    }
    if n == 0 {
        return;
    }
    let mut labels = vec![0];
    go(&mut labels, n, 0, &mut f);
}

/// The congruences of `x` whose quotient is again an L-algebra.
pub fn l_congruences(x: &FiniteLAlgebra) -> Vec<Congruence> {
    let mut out = Vec::new();
    for_each_partition(x.size(), |labels| {
        let c = Congruence::from_labels(labels);
        if c.compatibility_witness(x).is_some() {
            return;
        }
        let k = c.kernel(x);
        let antisymmetric = x.elements().all(|p| {
            x.elements()
                .all(|q| !(k.contains(x.op(p, q)) && k.contains(x.op(q, p))) || c.related(p, q))
        });
        if antisymmetric {
            out.push(c);
        }
    });
    out
}

fn ideal_congruence(a: &Analysis) -> Check {
    let x = &a.algebra;
    let l = &a.lattice;
    for &i in l.ideals() {
        let c = congruence_of(x, i).map_err(as_falsification)?;
        if let Some((p, q, r)) = c.compatibility_witness(x) {
            return Err(Falsification::new(
                FalsificationKind::CongruenceNotCompatible,
                "not compatible",
            )
            .ideals([i])
            .elements([p, q, r]));
        }
        if c.kernel(x) != i {
            return Err(violation("class of 1 differs from the ideal").ideals([i]));
        }
        let q = quotient(x, i).map_err(as_falsification)?;
        if !is_morphism(x, &q.algebra, &q.projection) || kernel(&q.projection, &q.algebra) != i {
            return Err(Falsification::new(
                FalsificationKind::QuotientNotWellDefined,
                "projection is not a morphism with kernel I",
            )
            .ideals([i]));
        }
    }
    if x.size() > PARTITION_LIMIT {
        return Ok(format!("{} ideals, partitions not enumerated", l.len()));
    }
    let congruences = l_congruences(x);
    for c in &congruences {
        let k = c.kernel(x);
        if l.index_of(k).is_none() {
            return Err(violation("kernel of an L-congruence is not an ideal").ideals([k]));
        }
        if congruence_of(x, k).map_err(as_falsification)? != *c {
            return Err(violation("L-congruence is not congruence mod its kernel").ideals([k]));
        }
    }
    if congruences.len() != l.len() {
        return Err(violation(format!(
            "{} L-congruences but {} ideals",
            congruences.len(),
            l.len()
        )));
    }
    Ok(String::new())
}

fn lattice_is_l_algebra(a: &Analysis) -> Check {
    let l = &a.lattice;
    if l.len() > crate::subset::MAX_ELEMENTS {
        return Ok("lattice too large to tabulate".into());
    }
    let j = l.as_l_algebra().map_err(as_falsification)?;
    if !j.structure_flags().brouwerian {
        return Err(violation("ideal lattice is not Brouwerian"));
    }
    for p in 0..l.len() {
        for q in 0..l.len() {
            if j.meet(p, q) != Some(l.meet(p, q)) || j.leq(p, q) != l.leq(p, q) {
                return Err(violation("meet is not intersection").ideals([l.ideal(p), l.ideal(q)]));
            }
        }
    }
    Ok(String::new())
}

fn sober(a: &Analysis) -> Check {
    let r = topology_report(&a.lattice, &a.spectrum);
    if !(r.t0 && r.sober && r.closure_is_specialization && r.open_map_injective) {
        let mut f = violation(format!(
            "t0={} sober={} specialization={} injective={}",
            r.t0, r.sober, r.closure_is_specialization, r.open_map_injective
        ));
        if let Some((p, q)) = r.t0_witness {
            f = f.ideals([
                a.lattice.ideal(a.spectrum.points()[p]),
                a.lattice.ideal(a.spectrum.points()[q]),
            ]);
        }
        return Err(f);
    }
    Ok(format!("{} points", r.points))
}

fn spatial(a: &Analysis) -> Check {
    spatiality_check(&a.lattice, &a.spectrum).map_err(as_falsification)?;
    let r = topology_report(&a.lattice, &a.spectrum);
    if !(r.frame_homomorphism && r.quasi_compact && r.generalized_spectral) {
        return Err(Falsification::new(
            FalsificationKind::SpatialityFailure,
            format!(
                "frame map={} quasi-compact={} spectral={}",
                r.frame_homomorphism, r.quasi_compact, r.generalized_spectral
            ),
        ));
    }
    Ok(String::new())
}

fn prop6(a: &Analysis) -> Check {
    let l = &a.lattice;
    for i in 0..l.len() {
        if i != l.top() && is_prime_by_residuation(l, i) != is_prime_by_meets(l, i) {
            return Err(Falsification::new(
                FalsificationKind::PrimeDefinitionMismatch,
                "primality tests disagree",
            )
            .ideals([l.ideal(i)]));
        }
    }
    let report = prop6_oracle(l, &a.spectrum).map_err(as_falsification)?;
    if let Some(row) = report.mismatches().next() {
        return Err(violation(format!(
            "prime={} but quotient irreducible={}",
            row.prime, row.quotient_irreducible
        ))
        .ideals([l.ideal(row.ideal)]));
    }
    Ok(String::new())
}

fn thm4(a: &Analysis) -> Check {
    let l = &a.lattice;
    for i in 0..l.len() {
        let r = relative_spectrum(l, &a.spectrum, i).map_err(as_falsification)?;
        if r.sub_points != r.open_points
            || r.quotient_points != r.closed_points
            || r.sub_points + r.quotient_points != a.spectrum.len()
        {
            return Err(Falsification::new(
                FalsificationKind::BijectionFailure,
                format!(
                    "|Spec I|={} |U_I|={} |Spec X/I|={} |A_I|={} |Spec X|={}",
                    r.sub_points,
                    r.open_points,
                    r.quotient_points,
                    r.closed_points,
                    a.spectrum.len()
                ),
            )
            .ideals([l.ideal(i)]));
        }
    }
    Ok(String::new())
}

/// Same correspondence with `Spec I` read as the primes of the lattice of
/// ideals of X contained in I.
fn thm4_interval(a: &Analysis) -> Check {
    let l = &a.lattice;
    let s = &a.spectrum;
    for i in 0..l.len() {
        let below: Vec<usize> = (0..l.len()).filter(|&j| l.leq(j, i)).collect();
        let relative: Vec<usize> = below
            .iter()
            .copied()
            .filter(|&p| {
                p != i
                    && below.iter().all(|&j| {
                        below
                            .iter()
                            .all(|&k| !l.leq(l.meet(j, k), p) || l.leq(j, p) || l.leq(k, p))
                    })
            })
            .collect();
        let open: Vec<usize> = s
            .points()
            .iter()
            .copied()
            .filter(|&q| !l.leq(i, q))
            .collect();
        let fail = |msg: &str, extra: usize| {
            Falsification::new(FalsificationKind::BijectionFailure, msg)
                .ideals([l.ideal(i), l.ideal(extra)])
        };
        for &p in &relative {
            let q = l.residuation(i, p);
            if !open.contains(&q) || l.meet(q, i) != p {
                return Err(fail("I·P is not a prime of U_I above P", p));
            }
        }
        for &q in &open {
            let p = l.meet(q, i);
            if !relative.contains(&p) || l.residuation(i, p) != q {
                return Err(fail("Q∩I is not a relative prime below Q", q));
            }
        }
        if relative.len() != open.len() {
            return Err(fail("point counts differ", i));
        }
    }
    Ok(String::new())
}

/// Counts confirmed by [`product_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductSummary {
    pub ideals: (usize, usize, usize),
    pub points: (usize, usize, usize),
}

/// Checks that ideals of `X×Y` are exactly the products `I×J` and that its
/// primes are exactly `P×Y` and `X×Q`.
pub fn product_oracle(x: &FiniteLAlgebra, y: &FiniteLAlgebra) -> Result<ProductSummary> {
    let p = product(x, y)?;
    let (lx, ly, lp) = (
        enumerate_ideals(x)?,
        enumerate_ideals(y)?,
        enumerate_ideals(&p.algebra)?,
    );
    let (sx, sy, sp) = (prime_ideals(&lx)?, prime_ideals(&ly)?, prime_ideals(&lp)?);
    let mismatch = |msg: String, ideals: Vec<Subset>| -> Error {
        Falsification::new(FalsificationKind::ProductMismatch, msg)
            .ideals(ideals)
            .into()
    };
    let rect = |i: Subset, j: Subset| -> Subset {
        i.iter()
            .flat_map(|a| j.iter().map(move |b| (a, b)))
            .map(|(a, b)| p.pair(a, b))
            .collect()
    };
    if lp.len() != lx.len() * ly.len() {
        return Err(mismatch(
            format!("{} ideals, expected {}×{}", lp.len(), lx.len(), ly.len()),
            vec![],
        ));
    }
    for &i in lx.ideals() {
        for &j in ly.ideals() {
            let k = rect(i, j);
            if lp.index_of(k).is_none() {
                return Err(mismatch(
                    format!(
                        "{} is not an ideal of the product",
                        p.algebra.format_subset(k)
                    ),
                    vec![k],
                ));
            }
        }
    }
    let mut expected: Vec<Subset> = sx
        .points()
        .iter()
        .map(|&q| rect(lx.ideal(q), y.carrier()))
        .chain(sy.points().iter().map(|&q| rect(x.carrier(), ly.ideal(q))))
        .collect();
    expected.sort_unstable();
    let mut actual: Vec<Subset> = sp.points().iter().map(|&q| lp.ideal(q)).collect();
    actual.sort_unstable();
    if expected != actual {
        return Err(mismatch(
            "spectrum is not the disjoint union".into(),
            actual,
        ));
    }
    Ok(ProductSummary {
        ideals: (lx.len(), ly.len(), lp.len()),
        points: (sx.len(), sy.len(), sp.len()),
    })
}

fn spec_product(a: &Analysis) -> Check {
    let x = &a.algebra;
    if 2 * x.size() > crate::subset::MAX_ELEMENTS {
        return Ok("too large for a product".into());
    }
    let b2 = fixture("B2").map_err(as_falsification)?;
    product_oracle(x, &b2).map_err(as_falsification)?;
    if x.size() <= 4 {
        product_oracle(x, x).map_err(as_falsification)?;
    }
    Ok(String::new())
}

fn prime_subset_quasiprime(a: &Analysis) -> Check {
    let x = &a.algebra;
    let qp = quasi_prime_elements(&a.lattice).map_err(as_falsification)?;
    let primes = prime_elements(x);
    if !primes.is_subset(qp) {
        return Err(
            Falsification::new(FalsificationKind::PrimeNotQuasiPrime, "P ⊄ QP")
                .elements(primes - qp),
        );
    }
    Ok(if primes == qp { "P = QP" } else { "P ⊊ QP" }.into())
}

fn attachment(a: &Analysis) -> Check {
    let r = prime_element_report(&a.lattice, &a.spectrum).map_err(as_falsification)?;
    for at in &r.attachments {
        if at.maximal.iter().any(|&m| a.spectrum.point_of(m).is_none()) {
            return Err(Falsification::new(
                FalsificationKind::AttachmentNotPrime,
                "maximal ideal is not prime",
            )
            .elements([at.element]));
        }
        if r.quasi_primes.contains(at.element) && !at.unique {
            return Err(Falsification::new(
                FalsificationKind::NonUniqueAttachment,
                "several maximal ideals",
            )
            .elements([at.element]));
        }
    }
    Ok(String::new())
}

fn principal(a: &Analysis) -> Check {
    if !a.flags.meet_closed {
        return Ok("not ∧-closed".into());
    }
    let x = &a.algebra;
    let l = &a.lattice;
    let principals: Vec<usize> = x.elements().map(|e| l.principal(e)).collect();
    if let Some(i) = (0..l.len()).find(|i| !principals.contains(i)) {
        return Err(violation("ideal is not principal").ideals([l.ideal(i)]));
    }
    for p in x.elements() {
        for q in x.elements() {
            let m = x.meet(p, q).expect("meet-closed");
            if l.join(principals[p], principals[q]) != principals[m] {
                return Err(violation("⟨x⟩ ∨ ⟨y⟩ differs from ⟨x∧y⟩").elements([p, q]));
            }
        }
    }
    Ok(String::new())
}

fn map17_law(a: &Analysis) -> Check {
    let r = map17(&a.lattice, &a.spectrum, &a.flags);
    if !r.consistent() {
        return Err(violation(r.summary()));
    }
    Ok(r.summary())
}

/// A named collection of algebras.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub id: String,
    pub algebras: Vec<FiniteLAlgebra>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: String,
    pub message: String,
    pub algebra: AlgebraDocument,
    pub elements: Vec<String>,
    pub ideals: Vec<Vec<String>>,
}

impl Witness {
    pub fn new(x: &FiniteLAlgebra, f: &Falsification) -> Self {
        let label = |e: usize| {
            if e < x.size() {
                x.label(e).to_string()
            } else {
                format!("#{e}")
            }
        };
        Witness {
            kind: format!("{:?}", f.kind),
            message: f.message.clone(),
            algebra: AlgebraDocument::from_algebra(x),
            elements: f.elements.iter().map(|&e| label(e)).collect(),
            ideals: f
                .ideals
                .iter()
                .map(|s| s.iter().map(label).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_us: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub law: String,
    pub corpus: String,
    pub verdict: Verdict,
    pub instances: usize,
    pub detail: String,
    pub witness: Option<Witness>,
    pub timing: Timing,
}

fn assemble(law: &Law, corpus: &Corpus, cells: Vec<(Check, Duration)>) -> LawReport {
    let instances = cells.len();
    let wall: Duration = cells.iter().map(|c| c.1).sum();
    let failures = cells.iter().filter(|c| c.0.is_err()).count();
    let first = cells.iter().position(|c| c.0.is_err());
    let (verdict, detail, witness) = match first {
        Some(k) => {
            let Err(f) = &cells[k].0 else { unreachable!() };
            (
                Verdict::Fail,
                format!("{failures} of {instances} failed"),
                Some(Witness::new(&corpus.algebras[k], f)),
            )
        }
        None => {
            let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
            for (c, _) in &cells {
                if let Ok(d) = c {
                    *counts.entry(d.as_str()).or_default() += 1;
                }
            }
            let detail = if instances == 1 {
                counts.into_keys().next().unwrap_or_default().to_string()
            } else {
                counts
                    .into_iter()
                    .filter(|(d, _)| !d.is_empty())
                    .map(|(d, c)| format!("{d} ({c})"))
                    .collect::<Vec<_>>()
                    .join("; ")
            };
            (Verdict::Pass, detail, None)
        }
    };
    LawReport {
        law: law.id.to_string(),
        corpus: corpus.id.clone(),
        verdict,
        instances,
        detail,
        witness,
        timing: Timing {
            wall_us: wall.as_micros() as u64,
        },
    }
}

/// Evaluates every law on every algebra of every corpus. Rows are sorted by
/// law id, then corpus id. `jobs` bounds the worker threads.
pub fn run_suite(corpora: &[Corpus], laws: &[&Law], jobs: Option<usize>) -> Vec<LawReport> {
    let work = || {
        let mut rows = Vec::new();
        for corpus in corpora {
            let analyses: Vec<std::result::Result<Analysis, Falsification>> = corpus
                .algebras
                .par_iter()
                .map(|x| Analysis::new(x).map_err(as_falsification))
                .collect();
            let cells: Vec<Vec<(Check, Duration)>> = laws
                .par_iter()
                .map(|law| {
                    analyses
                        .par_iter()
                        .map(|a| {
                            let start = Instant::now();
                            let r = match a {
                                Ok(a) => (law.check)(a),
                                Err(f) => Err(f.clone()),
                            };
                            (r, start.elapsed())
                        })
                        .collect()
                })
                .collect();
            for (law, cells) in laws.iter().zip(cells) {
                rows.push(assemble(law, corpus, cells));
            }
        }
        rows.sort_by(|a, b| (&a.law, &a.corpus).cmp(&(&b.law, &b.corpus)));
        rows
    };
    match jobs.map(|j| rayon::ThreadPoolBuilder::new().num_threads(j).build()) {
        Some(Ok(pool)) => pool.install(work),
        _ => work(),
    }
}

pub fn all_passed(reports: &[LawReport]) -> bool {
    reports.iter().all(|r| r.verdict == Verdict::Pass)
}

/// Re-runs `law` on the algebra stored in a witness.
pub fn replay(law: &Law, witness: &Witness) -> Check {
    let x = witness.algebra.to_algebra().map_err(as_falsification)?;
    let a = Analysis::new(&x).map_err(as_falsification)?;
    (law.check)(&a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{enumerate_all, fixtures};

    fn all_laws() -> Vec<&'static Law> {
        LAWS.iter().collect()
    }

    fn fixture_corpus() -> Corpus {
        Corpus {
            id: "fixtures".into(),
            algebras: fixtures().unwrap().into_iter().map(|f| f.algebra).collect(),
        }
    }

    #[test]
    fn ids_unique_and_required_present() {
        let mut ids: Vec<_> = LAWS.iter().map(|l| l.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), LAWS.len());
        for id in [
            "thm3.distributivity",
            "prop2.join",
            "prop3.sober",
            "prop6.iff",
            "thm4.bijection",
            "spec.product",
            "eq20.principal",
            "map17.iff-brouwerian",
            "prime.subset.quasiprime",
            "ideal.lattice.is.L-algebra",
            "spatial.locale",
        ] {
            assert!(law(id).is_some(), "{id}");
        }
    }

    #[test]
    fn partitions_counted_by_bell_numbers() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)] {
            let mut k = 0;
            for_each_partition(n, |_| k += 1);
            assert_eq!(k, bell);
        }
    }

    #[test]
    fn fixtures_pass_everything() {
        let rows = run_suite(&[fixture_corpus()], &all_laws(), None);
        assert_eq!(rows.len(), LAWS.len());
        for r in &rows {
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
            assert_eq!(r.instances, fixture_names().len());
        }
    }

    use crate::constructions::fixture_names;

    #[test]
    fn small_enumeration_passes() {
        for n in 1..=3 {
            let corpus = Corpus {
                id: format!("n{n}"),
                algebras: enumerate_all(n, false).unwrap(),
            };
            for r in run_suite(&[corpus], &all_laws(), Some(2)) {
                assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
            }
        }
    }

    /// Subalgebra ideals need not be ideals of X, so the subalgebra reading
    /// of the relative spectrum breaks at four elements.
    #[test]
    fn subalgebra_spectrum_counterexamples_at_four() {
        let corpus = Corpus {
            id: "n4".into(),
            algebras: enumerate_all(4, true).unwrap(),
        };
        for r in run_suite(&[corpus], &all_laws(), None) {
            if r.law == "thm4.bijection" {
                assert_eq!(r.verdict, Verdict::Fail);
                assert_eq!(r.detail, "2 of 44 failed");
                let w = r.witness.unwrap();
                assert_eq!(w.ideals[0], ["1", "b", "c"]);
                assert_eq!(w.ideals[1], ["1", "c"]);
            } else {
                assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
            }
        }
    }

    #[test]
    fn counterexample_by_hand() {
        let x = crate::io::parse_algebra(
            "elements: 1 a b c\nunit: 1\nrow 1: 1 a b c\nrow a: 1 1 1 b\nrow b: 1 a 1 c\nrow c: 1 a b 1\n",
        )
        .unwrap()
        .to_algebra()
        .unwrap();
        let i = Subset::from_indices([0, 2, 3]);
        let p = Subset::from_indices([0, 3]);
        let sub = x.subalgebra(i, "I").unwrap();
        assert!(crate::ideals::is_ideal(&sub, Subset::from_indices([0, 2])));
        assert!(!crate::ideals::is_ideal(&x, p));
        let a = Analysis::new(&x).unwrap();
        assert!(thm4(&a).is_err());
        assert!(thm4_interval(&a).is_ok());
    }

    #[test]
    fn diamond_map17_detail() {
        let corpus = Corpus {
            id: "diamond".into(),
            algebras: vec![fixture("diamond").unwrap()],
        };
        let rows = run_suite(&[corpus], &[law("map17.iff-brouwerian").unwrap()], None);
        assert_eq!(rows[0].verdict, Verdict::Pass);
        assert_eq!(rows[0].detail, "not injective, not Brouwerian");
    }

    #[test]
    fn b2_distributive() {
        let corpus = Corpus {
            id: "B2".into(),
            algebras: vec![fixture("B2").unwrap()],
        };
        let rows = run_suite(&[corpus], &[law("thm3.distributivity").unwrap()], None);
        assert_eq!(rows[0].verdict, Verdict::Pass);
        assert_eq!(rows[0].detail, "2 ideals");
    }

    #[test]
    fn rows_sorted_and_deterministic() {
        let corpora = [
            fixture_corpus(),
            Corpus {
                id: "n3".into(),
                algebras: enumerate_all(3, false).unwrap(),
            },
        ];
        let a = run_suite(&corpora, &all_laws(), Some(1));
        let b = run_suite(&corpora, &all_laws(), Some(4));
        let strip = |rows: Vec<LawReport>| {
            rows.into_iter()
                .map(|mut r| {
                    r.timing = Timing::default();
                    r
                })
                .collect::<Vec<_>>()
        };
        let (a, b) = (strip(a), strip(b));
        assert_eq!(a, b);
        assert!(a
            .windows(2)
            .all(|w| (&w[0].law, &w[0].corpus) <= (&w[1].law, &w[1].corpus)));
    }

    fn at_most_two(a: &Analysis) -> Check {
        let x = &a.algebra;
        if x.size() > 2 {
            Err(violation("too big")
                .elements([x.size() - 1])
                .ideals([a.lattice.ideal(a.lattice.bottom())]))
        } else {
            Ok(String::new())
        }
    }

    static SMALL: Law = Law {
        id: "test.small",
        description: "at most two elements",
        check: at_most_two,
    };

    #[test]
    fn failures_carry_replayable_witnesses() {
        let rows = run_suite(&[fixture_corpus()], &[&SMALL], None);
        let r = &rows[0];
        assert_eq!(r.verdict, Verdict::Fail);
        let w = r.witness.as_ref().unwrap();
        assert_eq!(w.algebra.name, "diamond");
        assert_eq!(w.elements, ["0"]);
        assert_eq!(w.ideals, [vec!["1".to_string()]]);
        let again = replay(&SMALL, w).unwrap_err();
        assert_eq!(again.message, "too big");
        // the witness survives a JSON round trip
        let json = serde_json::to_string(w).unwrap();
        let back: Witness = serde_json::from_str(&json).unwrap();
        assert!(replay(&SMALL, &back).is_err());
    }

    #[test]
    fn product_oracle_on_small_fixtures() {
        let names = ["B2", "diamond", "chain3"];
        for a in names {
            for b in names {
                let (x, y) = (fixture(a).unwrap(), fixture(b).unwrap());
                let s = product_oracle(&x, &y).unwrap();
                assert_eq!(s.ideals.2, s.ideals.0 * s.ideals.1);
                assert_eq!(s.points.2, s.points.0 + s.points.1);
            }
        }
    }
}
