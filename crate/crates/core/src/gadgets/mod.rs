//! Gadget catalogue: clause templates paired with the boundary predicate
//! each one realizes.

mod templates;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formula::{Clause, Flavor, Lit, Mode, Var};
use crate::oracle::BoundaryPredicate;

use templates::Template;

pub use verify::{verify_all, verify_gadget};

/// Hands out variable ids that do not occur anywhere yet.
#[derive(Clone, Debug)]
pub struct FreshAllocator {
    next: u32,
}

impl FreshAllocator {
    /// Allocator whose first id is `start` (usually the current variable count).
    pub fn new(start: usize) -> FreshAllocator {
        FreshAllocator { next: start as u32 }
    }

    pub fn fresh(&mut self) -> Var {
        let v = Var(self.next);
        self.next += 1;
        v
    }

    pub fn fresh_n(&mut self, count: usize) -> Vec<Var> {
        (0..count).map(|_| self.fresh()).collect()
    }

    /// Number of ids in use, i.e. the variable count of the enclosing instance.
    pub fn num_vars(&self) -> usize {
        self.next as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GadgetKind {
    #[serde(rename = "NE6")]
    Ne6,
    #[serde(rename = "EQ_NE")]
    EqNe,
    #[serde(rename = "P1")]
    P1,
    #[serde(rename = "NE9")]
    Ne9,
    #[serde(rename = "EQ13")]
    Eq13,
    #[serde(rename = "EQ4L")]
    Eq4L,
    #[serde(rename = "S")]
    S,
    #[serde(rename = "S_BAR")]
    SBar,
    #[serde(rename = "A")]
    A,
    #[serde(rename = "D")]
    D,
    #[serde(rename = "F")]
    F,
    #[serde(rename = "G")]
    G,
    #[serde(rename = "H")]
    H,
    #[serde(rename = "C12")]
    C12,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "B_BAR")]
    BBar,
    #[serde(rename = "CHAIN22")]
    Chain22,
    #[serde(rename = "CHAIN22_NEG")]
    Chain22Neg,
    #[serde(rename = "STAR22")]
    Star22,
    #[serde(rename = "INC32")]
    Inc32,
}

/// Boundary predicate of a catalogue row, over the row's slot values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Accepts {
    Any,
    Different,
    AllEqual,
    AtLeastOneTrue,
    AtLeastOneFalse,
    OnlyTrue,
    /// Odd slots equal, even slots equal, and the two groups differ.
    Alternating,
    /// Neither slots {1,2,6} nor slots {3,4,5} all true.
    NotBothTriplesTrue,
}

impl Accepts {
    pub fn eval(self, v: &[bool]) -> bool {
        match self {
            Accepts::Any => true,
            Accepts::Different => v[0] != v[1],
            Accepts::AllEqual => v.iter().all(|&b| b == v[0]),
            Accepts::AtLeastOneTrue => v.iter().any(|&b| b),
            Accepts::AtLeastOneFalse => v.iter().any(|&b| !b),
            Accepts::OnlyTrue => v.iter().all(|&b| b),
            Accepts::Alternating => (0..v.len()).all(|i| v[i] == (v[0] ^ (i % 2 == 1))),
            Accepts::NotBothTriplesTrue => !(v[0] && v[1] && v[5]) && !(v[2] && v[3] && v[4]),
        }
    }
}

/// One catalogue row.
#[derive(Clone, Copy, Debug)]
pub struct GadgetInfo {
    pub kind: GadgetKind,
    pub arity: usize,
    pub aux: usize,
    pub clauses: usize,
    pub mode: Mode,
    pub flavor: Flavor,
    pub accepts: Accepts,
    /// Verified from its parts rather than by one enumeration.
    pub compositional: bool,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 20] = [
        GadgetKind::Ne6,
        GadgetKind::EqNe,
        GadgetKind::P1,
        GadgetKind::Ne9,
        GadgetKind::Eq13,
        GadgetKind::Eq4L,
        GadgetKind::S,
        GadgetKind::SBar,
        GadgetKind::A,
        GadgetKind::D,
        GadgetKind::F,
        GadgetKind::G,
        GadgetKind::H,
        GadgetKind::C12,
        GadgetKind::B,
        GadgetKind::BBar,
        GadgetKind::Chain22,
        GadgetKind::Chain22Neg,
        GadgetKind::Star22,
        GadgetKind::Inc32,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::Ne6 => "NE6",
            GadgetKind::EqNe => "EQ_NE",
            GadgetKind::P1 => "P1",
            GadgetKind::Ne9 => "NE9",
            GadgetKind::Eq13 => "EQ13",
            GadgetKind::Eq4L => "EQ4L",
            GadgetKind::S => "S",
            GadgetKind::SBar => "S_BAR",
            GadgetKind::A => "A",
            GadgetKind::D => "D",
            GadgetKind::F => "F",
            GadgetKind::G => "G",
            GadgetKind::H => "H",
            GadgetKind::C12 => "C12",
            GadgetKind::B => "B",
            GadgetKind::BBar => "B_BAR",
            GadgetKind::Chain22 => "CHAIN22",
            GadgetKind::Chain22Neg => "CHAIN22_NEG",
            GadgetKind::Star22 => "STAR22",
            GadgetKind::Inc32 => "INC32",
        }
    }

    pub fn info(self) -> GadgetInfo {
        use Accepts::*;
        use GadgetKind::*;
        let (arity, aux, clauses, mode, accepts) = match self {
            Ne6 => (2, 5, 6, Mode::Nae, Different),
            EqNe => (2, 13, 14, Mode::Nae, AllEqual),
            P1 => (1, 5, 7, Mode::Nae, Any),
            Ne9 => (2, 6, 9, Mode::Nae, Different),
            Eq13 => (2, 9, 13, Mode::Nae, AllEqual),
            Eq4L => (4, 6, 12, Mode::Nae, AllEqual),
            S => (3, 6, 13, Mode::Sat, AtLeastOneTrue),
            SBar => (3, 6, 13, Mode::Sat, AtLeastOneFalse),
            A => (2, 4, 10, Mode::Sat, AtLeastOneFalse),
            D => (6, 9, 20, Mode::Sat, AtLeastOneTrue),
            F => (1, 30, 61, Mode::Sat, OnlyTrue),
            G => (3, 6, 11, Mode::Sat, AtLeastOneTrue),
            H => (3, 9, 16, Mode::Sat, AtLeastOneFalse),
            C12 => (2, 8, 12, Mode::Sat, AtLeastOneTrue),
            B => (3, 27, 37, Mode::Sat, AtLeastOneTrue),
            BBar => (3, 27, 37, Mode::Sat, AtLeastOneFalse),
            Chain22 => (6, 0, 6, Mode::Sat, Alternating),
            Chain22Neg => (6, 0, 2, Mode::Sat, NotBothTriplesTrue),
            Star22 => (6, 9, 18, Mode::Sat, AllEqual),
            Inc32 => (3, 6, 13, Mode::Sat, Any),
        };
        GadgetInfo {
            kind: self,
            arity,
            aux,
            clauses,
            mode,
            flavor: if self == Star22 { Flavor::Multiset } else { Flavor::Set },
            accepts,
            compositional: matches!(self, F | B | BBar),
        }
    }

    fn template(self) -> Option<&'static Template> {
        Some(match self {
            GadgetKind::Ne6 => &templates::NE6,
            GadgetKind::P1 => &templates::P1,
            GadgetKind::Ne9 => &templates::NE9,
            GadgetKind::Eq13 => &templates::EQ13,
            GadgetKind::Eq4L => &templates::EQ4L,
            GadgetKind::S | GadgetKind::SBar => &templates::S,
            GadgetKind::A => &templates::A,
            GadgetKind::D => &templates::D,
            GadgetKind::G => &templates::G,
            GadgetKind::H => &templates::H,
            GadgetKind::C12 => &templates::C12,
            GadgetKind::Chain22 => &templates::CHAIN22,
            GadgetKind::Chain22Neg => &templates::CHAIN22_NEG,
            GadgetKind::Star22 => &templates::STAR22,
            GadgetKind::Inc32 => &templates::INC32,
            GadgetKind::EqNe | GadgetKind::F | GadgetKind::B | GadgetKind::BBar => return None,
        })
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GadgetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let wanted = s.to_ascii_uppercase().replace('-', "_");
        GadgetKind::ALL
            .into_iter()
            .find(|k| k.name() == wanted || k.name().replace('_', "") == wanted)
            .ok_or_else(|| Error::Unknown {
                what: "gadget",
                name: s.to_string(),
            })
    }
}

/// How a gadget decomposes into independently verifiable parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Composition {
    pub parts: Vec<GadgetInstance>,
    /// Clauses outside every part.
    pub glue: Vec<Clause>,
    /// Auxiliary variables shared by parts and glue (not owned by any part).
    pub links: Vec<Var>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetInstance {
    pub kind: GadgetKind,
    /// Boundary slot values in template order; may repeat variables.
    pub slots: Vec<Var>,
    pub aux: Vec<Var>,
    pub clauses: Vec<Clause>,
    /// Accepted assignments over the distinct boundary variables.
    pub predicate: BoundaryPredicate,
    pub mode: Mode,
    pub flavor: Flavor,
    pub composition: Option<Composition>,
}

impl GadgetInstance {
    /// Distinct boundary variables in first-occurrence order.
    pub fn boundary(&self) -> &[Var] {
        &self.predicate.boundary
    }

    /// Multiset of literals over all clauses.
    pub fn literals(&self) -> impl Iterator<Item = Lit> + '_ {
        self.clauses.iter().flat_map(|c| c.lits().iter().copied())
    }
}

fn distinct(slots: &[Var]) -> Vec<Var> {
    let mut out: Vec<Var> = Vec::new();
    for &v in slots {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Predicate over distinct boundary variables induced by a slot predicate.
fn induced_predicate(slots: &[Var], accepts: Accepts) -> BoundaryPredicate {
    let boundary = distinct(slots);
    let positions: Vec<usize> = slots
        .iter()
        .map(|s| boundary.iter().position(|b| b == s).unwrap())
        .collect();
    BoundaryPredicate::from_fn(boundary, |vals| {
        let slot_vals: Vec<bool> = positions.iter().map(|&p| vals[p]).collect();
        accepts.eval(&slot_vals)
    })
}

fn instantiate(
    template: &Template,
    slots: &[Var],
    alloc: &mut FreshAllocator,
    negate: bool,
) -> (Vec<Var>, Vec<Clause>) {
    let aux = alloc.fresh_n(template.aux.len());
    let lookup = |name: &str| -> Var {
        if let Some(i) = template.slots.iter().position(|&s| s == name) {
            slots[i]
        } else {
            let i = template
                .aux
                .iter()
                .position(|&s| s == name)
                .unwrap_or_else(|| panic!("template name `{name}` is undeclared"));
            aux[i]
        }
    };
    let clauses = template
        .clauses
        .iter()
        .map(|text| {
            Clause::new(
                text.split_whitespace()
                    .map(|tok| {
                        let (neg, name) = match tok.strip_prefix('-') {
                            Some(rest) => (true, rest),
                            None => (false, tok),
                        };
                        Lit::new(lookup(name), neg ^ negate)
                    })
                    .collect(),
            )
        })
        .collect();
    (aux, clauses)
}

/// Instantiates `kind` on the given boundary slots with fresh auxiliary
/// variables. Slots may repeat as long as no set-flavor clause ends up with
/// a repeated variable.
pub fn build_gadget(kind: GadgetKind, slots: &[Var], alloc: &mut FreshAllocator) -> Result<GadgetInstance, Error> {
    let info = kind.info();
    if slots.len() != info.arity {
        return Err(Error::GadgetArity {
            kind: kind.to_string(),
            expected: info.arity,
            found: slots.len(),
        });
    }
    let (aux, clauses, composition) = match kind.template() {
        Some(t) => {
            let (aux, clauses) = instantiate(t, slots, alloc, kind == GadgetKind::SBar);
            (aux, clauses, None)
        }
        None => build_composite(kind, slots, alloc)?,
    };
    if info.flavor == Flavor::Set {
        if let Some(var) = clauses.iter().find_map(Clause::repeated_var) {
            return Err(Error::GadgetRepeatedLiteral {
                kind: kind.to_string(),
                var,
            });
        }
    }
    Ok(GadgetInstance {
        kind,
        slots: slots.to_vec(),
        aux,
        clauses,
        predicate: induced_predicate(slots, info.accepts),
        mode: info.mode,
        flavor: info.flavor,
        composition,
    })
}

type Built = (Vec<Var>, Vec<Clause>, Option<Composition>);

fn build_composite(kind: GadgetKind, slots: &[Var], alloc: &mut FreshAllocator) -> Result<Built, Error> {
    match kind {
        GadgetKind::EqNe => {
            // NE(p, q) ∪ NE(p, r) ∪ {x, q, r}, {y, q, r}
            let links = alloc.fresh_n(3);
            let (p, q, r) = (links[0], links[1], links[2]);
            let ne1 = build_gadget(GadgetKind::Ne6, &[p, q], alloc)?;
            let ne2 = build_gadget(GadgetKind::Ne6, &[p, r], alloc)?;
            let glue = vec![
                Clause::new(vec![slots[0].pos(), q.pos(), r.pos()]),
                Clause::new(vec![slots[1].pos(), q.pos(), r.pos()]),
            ];
            Ok(assemble(links, vec![ne1, ne2], glue))
        }
        GadgetKind::F => {
            // D(y, u_k, u_k, u_k, u_k, u_k) for k = 1..3 and {ū1, ū2, ū3}
            let y = slots[0];
            let us = alloc.fresh_n(3);
            let parts = us
                .iter()
                .map(|&u| build_gadget(GadgetKind::D, &[y, u, u, u, u, u], alloc))
                .collect::<Result<Vec<_>, _>>()?;
            let glue = vec![Clause::new(us.iter().map(|u| u.neg()).collect())];
            Ok(assemble(us, parts, glue))
        }
        GadgetKind::B | GadgetKind::BBar => {
            // C(u, x) ∪ C(v, y) ∪ C(w, z) ∪ {ū, v̄, w̄}
            let links = alloc.fresh_n(3);
            let mut parts = Vec::new();
            for (&link, &slot) in links.iter().zip(slots) {
                parts.push(build_gadget(GadgetKind::C12, &[link, slot], alloc)?);
            }
            let glue = vec![Clause::new(links.iter().map(|u| u.neg()).collect())];
            let (aux, clauses, mut comp) = assemble(links, parts, glue);
            if kind == GadgetKind::BBar {
                let comp = comp.as_mut().unwrap();
                for part in &mut comp.parts {
                    *part = part.flipped();
                }
                comp.glue = comp.glue.iter().map(Clause::negated).collect();
                let clauses = clauses.iter().map(Clause::negated).collect();
                return Ok((aux, clauses, Some(comp.clone())));
            }
            Ok((aux, clauses, comp))
        }
        _ => unreachable!("{kind} has a template"),
    }
}

fn assemble(links: Vec<Var>, parts: Vec<GadgetInstance>, glue: Vec<Clause>) -> Built {
    let mut aux = links.clone();
    let mut clauses = Vec::new();
    for part in &parts {
        aux.extend(&part.aux);
        clauses.extend(part.clauses.iter().cloned());
    }
    clauses.extend(glue.iter().cloned());
    (aux, clauses, Some(Composition { parts, glue, links }))
}

impl GadgetInstance {
    /// Global polarity flip: every literal negated, predicate complemented
    /// pattern-wise.
    pub fn flipped(&self) -> GadgetInstance {
        GadgetInstance {
            kind: self.kind,
            slots: self.slots.clone(),
            aux: self.aux.clone(),
            clauses: self.clauses.iter().map(Clause::negated).collect(),
            predicate: self.predicate.flipped(),
            mode: self.mode,
            flavor: self.flavor,
            composition: self.composition.as_ref().map(|c| Composition {
                parts: c.parts.iter().map(GadgetInstance::flipped).collect(),
                glue: c.glue.iter().map(Clause::negated).collect(),
                links: c.links.clone(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in GadgetKind::ALL {
            assert_eq!(k.name().parse::<GadgetKind>().unwrap(), k);
        }
        assert_eq!("sbar".parse::<GadgetKind>().unwrap(), GadgetKind::SBar);
        assert!("Q7".parse::<GadgetKind>().is_err());
    }

    #[test]
    fn catalogue_sizes() {
        for k in GadgetKind::ALL {
            let info = k.info();
            let mut alloc = FreshAllocator::new(info.arity);
            let slots: Vec<Var> = (0..info.arity as u32).map(Var).collect();
            let g = build_gadget(k, &slots, &mut alloc).unwrap();
            assert_eq!(g.aux.len(), info.aux, "{k} aux");
            assert_eq!(g.clauses.len(), info.clauses, "{k} clauses");
            assert_eq!(alloc.num_vars(), info.arity + info.aux, "{k} allocation");
        }
    }

    #[test]
    fn s_on_one_variable() {
        let x = Var(0);
        let mut alloc = FreshAllocator::new(1);
        let g = build_gadget(GadgetKind::S, &[x, x, x], &mut alloc).unwrap();
        assert_eq!(g.clauses.len(), 13);
        let (a, b, c, d, e, f) = (Var(1), Var(2), Var(3), Var(4), Var(5), Var(6));
        assert_eq!(g.clauses[0], Clause::new(vec![x.pos(), a.pos(), b.pos()]));
        assert_eq!(g.clauses[1], Clause::new(vec![x.pos(), c.pos(), d.pos()]));
        assert_eq!(g.clauses[2], Clause::new(vec![x.pos(), e.pos(), f.pos()]));
        assert_eq!(g.boundary(), &[x]);
        assert_eq!(g.predicate.accepted(), &[1]);
    }

    #[test]
    fn arity_and_repetition_errors() {
        let mut alloc = FreshAllocator::new(2);
        assert!(matches!(
            build_gadget(GadgetKind::Ne9, &[Var(0)], &mut alloc),
            Err(Error::GadgetArity {
                expected: 2,
                found: 1,
                ..
            })
        ));
        // NE6 puts x and y into one clause
        assert!(matches!(
            build_gadget(GadgetKind::Ne6, &[Var(0), Var(0)], &mut alloc),
            Err(Error::GadgetRepeatedLiteral { .. })
        ));
    }

    #[test]
    fn repeated_slots_collapse_boundary() {
        let (y, u) = (Var(0), Var(1));
        let mut alloc = FreshAllocator::new(2);
        let g = build_gadget(GadgetKind::D, &[y, u, u, u, u, u], &mut alloc).unwrap();
        assert_eq!(g.boundary(), &[y, u]);
        assert_eq!(g.predicate.accepted(), &[0b01, 0b10, 0b11]);
    }

    #[test]
    fn alternating_predicate() {
        assert!(Accepts::Alternating.eval(&[true, false, true, false, true, false]));
        assert!(Accepts::Alternating.eval(&[false, true, false, true, false, true]));
        assert!(!Accepts::Alternating.eval(&[true, true, true, false, true, false]));
    }
}
