use std::collections::BTreeMap;

use crate::error::SmilesError;
use crate::mol::{AtomDraft, BondOrder, MoleculeDraft};

use super::token::{tokenize, BondSymbol, TokenKind};

fn syntax(position: usize, message: impl Into<String>) -> SmilesError {
    SmilesError::Syntax {
        position,
        message: message.into(),
    }
}

fn bond_order(symbol: BondSymbol) -> BondOrder {
    match symbol {
        BondSymbol::Single | BondSymbol::Directional => BondOrder::Single,
        BondSymbol::Double => BondOrder::Double,
        BondSymbol::Triple => BondOrder::Triple,
        BondSymbol::Aromatic => BondOrder::Aromatic,
    }
}

fn default_order(draft: &MoleculeDraft, a: usize, b: usize) -> BondOrder {
    if draft.atoms[a].aromatic && draft.atoms[b].aromatic {
        BondOrder::Aromatic
    } else {
        BondOrder::Single
    }
}

struct OpenRing {
    atom: usize,
    bond: Option<BondSymbol>,
    position: usize,
}

/// Parses SMILES text into an unsanitized draft.
pub fn parse_smiles(text: &str) -> Result<MoleculeDraft, SmilesError> {
    let offset = text.len() - text.trim_start().len();
    let body = text.trim();
    if body.is_empty() {
        return Err(SmilesError::Empty);
    }
    parse_body(body).map_err(|e| shift(e, offset, text.len()))
}

fn shift(e: SmilesError, offset: usize, len: usize) -> SmilesError {
    let fix = |p: usize| (p + offset).min(len.saturating_sub(1));
    match e {
        SmilesError::Empty => SmilesError::Empty,
        SmilesError::Syntax { position, message } => SmilesError::Syntax {
            position: fix(position),
            message,
        },
        SmilesError::UnclosedRing { position, label } => SmilesError::UnclosedRing {
            position: fix(position),
            label,
        },
        SmilesError::UnbalancedParen { position } => SmilesError::UnbalancedParen {
            position: fix(position),
        },
        SmilesError::ChargeOverflow { position, charge } => SmilesError::ChargeOverflow {
            position: fix(position),
            charge,
        },
    }
}

fn parse_body(text: &str) -> Result<MoleculeDraft, SmilesError> {
    let tokens = tokenize(text)?;
    let mut draft = MoleculeDraft::new();
    draft.source = Some(text.to_string());

    let mut prev: Option<usize> = None;
    let mut pending: Option<(BondSymbol, usize)> = None;
    let mut branches: Vec<(usize, usize)> = Vec::new();
    let mut rings: BTreeMap<u32, OpenRing> = BTreeMap::new();
    let mut after_open = false;

    for tok in &tokens {
        let pos = tok.span.start;
        let was_after_open = std::mem::replace(&mut after_open, false);
        match tok.kind {
            TokenKind::OrganicAtom { .. } | TokenKind::BracketAtom(_) => {
                let atom = match tok.kind {
                    TokenKind::OrganicAtom { element, aromatic } => {
                        AtomDraft::organic(element, aromatic)
                    }
                    TokenKind::BracketAtom(b) => {
                        if b.chiral {
                            draft.stereo_ignored = true;
                        }
                        AtomDraft {
                            element: b.element,
                            charge: b.charge,
                            isotope: b.isotope,
                            explicit_h: Some(b.hydrogens),
                            aromatic: b.aromatic,
                        }
                    }
                    _ => unreachable!(),
                };
                let idx = draft.add_atom(atom);
                if let Some(p) = prev {
                    let order = match pending.take() {
                        Some((sym, _)) => bond_order(sym),
                        None => default_order(&draft, p, idx),
                    };
                    draft.add_bond(p, idx, order);
                } else if let Some((_, bpos)) = pending {
                    return Err(syntax(bpos, "bond without a preceding atom"));
                }
                prev = Some(idx);
            }
            TokenKind::Bond(sym) => {
                if prev.is_none() {
                    return Err(syntax(pos, "bond without a preceding atom"));
                }
                if pending.is_some() {
                    return Err(syntax(pos, "consecutive bond symbols"));
                }
                if sym == BondSymbol::Directional {
                    draft.stereo_ignored = true;
                }
                pending = Some((sym, pos));
            }
            TokenKind::RingClosure(label) => {
                let Some(atom) = prev else {
                    return Err(syntax(pos, "ring closure without a preceding atom"));
                };
                let bond = pending.take().map(|(s, _)| s);
                match rings.remove(&label) {
                    Some(open) => {
                        let order = match (open.bond, bond) {
                            (Some(a), Some(b)) if bond_order(a) != bond_order(b) => {
                                return Err(syntax(pos, "conflicting ring closure bond symbols"))
                            }
                            (Some(s), _) | (None, Some(s)) => bond_order(s),
                            (None, None) => default_order(&draft, open.atom, atom),
                        };
                        if open.atom == atom {
                            return Err(syntax(pos, "ring closure bonds an atom to itself"));
                        }
                        if draft.has_bond(open.atom, atom) {
                            return Err(syntax(pos, "ring closure duplicates an existing bond"));
                        }
                        draft.add_bond(open.atom, atom, order);
                    }
                    None => {
                        rings.insert(
                            label,
                            OpenRing {
                                atom,
                                bond,
                                position: pos,
                            },
                        );
                    }
                }
            }
            TokenKind::BranchOpen => {
                let Some(atom) = prev else {
                    return Err(syntax(pos, "branch without a preceding atom"));
                };
                if let Some((_, bpos)) = pending {
                    return Err(syntax(bpos, "bond symbol before a branch"));
                }
                branches.push((atom, pos));
                after_open = true;
            }
            TokenKind::BranchClose => {
                let Some((atom, _)) = branches.pop() else {
                    return Err(SmilesError::UnbalancedParen { position: pos });
                };
                if was_after_open {
                    return Err(syntax(pos, "empty branch"));
                }
                if let Some((_, bpos)) = pending {
                    return Err(syntax(bpos, "dangling bond at end of branch"));
                }
                prev = Some(atom);
            }
            TokenKind::Dot => {
                if prev.is_none() {
                    return Err(syntax(pos, "'.' without a preceding atom"));
                }
                if let Some((_, bpos)) = pending {
                    return Err(syntax(bpos, "bond symbol before '.'"));
                }
                prev = None;
            }
        }
    }

    if let Some((_, bpos)) = pending {
        return Err(syntax(bpos, "dangling bond at end of input"));
    }
    if let Some(&(_, position)) = branches.first() {
        return Err(SmilesError::UnbalancedParen { position });
    }
    if let Some((&label, open)) = rings.iter().min_by_key(|(_, r)| r.position) {
        return Err(SmilesError::UnclosedRing {
            position: open.position,
            label,
        });
    }
    if prev.is_none() {
        return Err(syntax(text.len() - 1, "input ends with '.'"));
    }
    Ok(draft)
}
