use std::collections::BTreeMap;

use crate::error::SmartsError;
use crate::mol::Element;

use super::pattern::{AtomPrimitive, BondPrimitive, Expr, QueryAtom, QueryBond, SmartsPattern};

fn syntax(position: usize, message: impl Into<String>) -> SmartsError {
    SmartsError::Syntax {
        position,
        message: message.into(),
    }
}

fn unsupported(position: usize, primitive: impl Into<String>) -> SmartsError {
    SmartsError::UnsupportedPrimitive {
        position,
        primitive: primitive.into(),
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

/// Builds an n-ary node, collapsing singletons.
fn join<P>(mut parts: Vec<Expr<P>>, make: fn(Vec<Expr<P>>) -> Expr<P>) -> Expr<P> {
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        make(parts)
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        self.bytes.get(self.pos + k).copied()
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (start != self.pos).then(|| {
            std::str::from_utf8(&self.bytes[start..self.pos])
                .unwrap()
                .parse()
                .unwrap_or(u32::MAX)
        })
    }

    // Generic precedence-climbing over `!` > `&`/implicit > `,` > `;`.
    fn low_and<P>(
        &mut self,
        prim: &mut impl FnMut(&mut Self) -> Result<Expr<P>, SmartsError>,
        stop: &impl Fn(u8) -> bool,
    ) -> Result<Expr<P>, SmartsError> {
        let mut parts = vec![self.or(prim, stop)?];
        while self.peek() == Some(b';') {
            self.pos += 1;
            parts.push(self.or(prim, stop)?);
        }
        Ok(join(parts, Expr::And))
    }

    fn or<P>(
        &mut self,
        prim: &mut impl FnMut(&mut Self) -> Result<Expr<P>, SmartsError>,
        stop: &impl Fn(u8) -> bool,
    ) -> Result<Expr<P>, SmartsError> {
        let mut parts = vec![self.high_and(prim, stop)?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            parts.push(self.high_and(prim, stop)?);
        }
        Ok(join(parts, Expr::Or))
    }

    fn high_and<P>(
        &mut self,
        prim: &mut impl FnMut(&mut Self) -> Result<Expr<P>, SmartsError>,
        stop: &impl Fn(u8) -> bool,
    ) -> Result<Expr<P>, SmartsError> {
        let mut parts = vec![self.unary(prim)?];
        loop {
            match self.peek() {
                Some(b'&') => {
                    self.pos += 1;
                    parts.push(self.unary(prim)?);
                }
                Some(c) if c != b',' && c != b';' && !stop(c) => parts.push(self.unary(prim)?),
                _ => break,
            }
        }
        Ok(join(parts, Expr::And))
    }

    fn unary<P>(
        &mut self,
        prim: &mut impl FnMut(&mut Self) -> Result<Expr<P>, SmartsError>,
    ) -> Result<Expr<P>, SmartsError> {
        if self.peek() == Some(b'!') {
            self.pos += 1;
            return Ok(Expr::Not(Box::new(self.unary(prim)?)));
        }
        prim(self)
    }

    fn element_pair(&self) -> Option<Element> {
        let (a, b) = (self.peek()?, self.peek_at(1)?);
        if !a.is_ascii_uppercase() || !b.is_ascii_lowercase() {
            return None;
        }
        Element::from_symbol(&format!("{}{}", a as char, b as char))
    }

    /// One primitive inside `[...]`. `first` is true at the bracket start.
    fn atom_primitive(&mut self, first: bool) -> Result<Expr<AtomPrimitive>, SmartsError> {
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Err(syntax(start, "unterminated bracket atom"));
        };
        let counted = |p: &mut Self, default: u32| p.number().unwrap_or(default);
        let prim = match c {
            b'*' => {
                self.pos += 1;
                AtomPrimitive::Any
            }
            b'#' => {
                self.pos += 1;
                let z = self
                    .number()
                    .ok_or_else(|| syntax(start, "'#' needs an atomic number"))?;
                if !(1..=118).contains(&z) {
                    return Err(syntax(start, "atomic number out of range"));
                }
                AtomPrimitive::AtomicNumber(z as u8)
            }
            b'+' | b'-' => {
                self.pos += 1;
                let unit = if c == b'+' { 1 } else { -1 };
                let q = match self.number() {
                    Some(n) => unit * n.min(15) as i32,
                    None => {
                        let mut q = unit;
                        while self.peek() == Some(c) {
                            self.pos += 1;
                            q += unit;
                        }
                        q
                    }
                };
                AtomPrimitive::Charge(q)
            }
            b'$' => return Err(unsupported(start, "recursive SMARTS $(...)")),
            b'@' => return Err(unsupported(start, "chirality")),
            b'0'..=b'9' => return Err(unsupported(start, "isotope")),
            b'H' if first && matches!(self.peek_at(1), Some(b']' | b'+' | b'-')) => {
                self.pos += 1;
                AtomPrimitive::AtomicNumber(1)
            }
            _ if self.element_pair().is_some() => {
                let element = self.element_pair().unwrap();
                self.pos += 2;
                AtomPrimitive::Symbol {
                    element,
                    aromatic: false,
                }
            }
            b'H' => {
                self.pos += 1;
                AtomPrimitive::TotalH(counted(self, 1))
            }
            b'D' => {
                self.pos += 1;
                AtomPrimitive::Degree(counted(self, 1))
            }
            b'X' => {
                self.pos += 1;
                AtomPrimitive::Connectivity(counted(self, 1))
            }
            b'R' => {
                self.pos += 1;
                match self.number() {
                    None => AtomPrimitive::InRing,
                    Some(0) => return Ok(Expr::Not(Box::new(Expr::Prim(AtomPrimitive::InRing)))),
                    Some(n) => AtomPrimitive::RingCount(n),
                }
            }
            b'A' => {
                self.pos += 1;
                AtomPrimitive::Aliphatic
            }
            b'r' => {
                self.pos += 1;
                match self.number() {
                    None => AtomPrimitive::InRing,
                    Some(n) => AtomPrimitive::SmallestRing(n),
                }
            }
            b's' if self.peek_at(1) == Some(b'e') => {
                self.pos += 2;
                AtomPrimitive::Symbol {
                    element: Element::new(34).unwrap(),
                    aromatic: true,
                }
            }
            b'a' if self.peek_at(1) == Some(b's') => {
                self.pos += 2;
                AtomPrimitive::Symbol {
                    element: Element::new(33).unwrap(),
                    aromatic: true,
                }
            }
            b'a' => {
                self.pos += 1;
                AtomPrimitive::Aromatic
            }
            b'b' | b'c' | b'n' | b'o' | b'p' | b's' => {
                self.pos += 1;
                let el = Element::from_symbol(&(c.to_ascii_uppercase() as char).to_string());
                AtomPrimitive::Symbol {
                    element: el.unwrap(),
                    aromatic: true,
                }
            }
            c if c.is_ascii_uppercase() => {
                let Some(element) = Element::from_symbol(&(c as char).to_string()) else {
                    return Err(syntax(start, format!("unknown element {:?}", c as char)));
                };
                self.pos += 1;
                AtomPrimitive::Symbol {
                    element,
                    aromatic: false,
                }
            }
            c if c.is_ascii_lowercase() => {
                return Err(unsupported(start, (c as char).to_string()));
            }
            c => {
                return Err(syntax(
                    start,
                    format!("unexpected {:?} in bracket atom", c as char),
                ))
            }
        };
        Ok(Expr::Prim(prim))
    }

    fn bracket_atom(&mut self) -> Result<Expr<AtomPrimitive>, SmartsError> {
        let open = self.pos;
        self.pos += 1;
        if self.peek() == Some(b']') {
            return Err(syntax(open, "empty bracket atom"));
        }
        let body_start = self.pos;
        let stop = |c: u8| c == b']' || c == b':';
        let mut prim = |p: &mut Self| {
            let first = p.pos == body_start;
            p.atom_primitive(first)
        };
        let expr = self.low_and(&mut prim, &stop)?;
        if self.peek() == Some(b':') {
            // atom map: parsed and discarded
            self.pos += 1;
            self.number()
                .ok_or_else(|| syntax(self.pos, "expected atom map number"))?;
        }
        if self.peek() != Some(b']') {
            return Err(syntax(self.pos.min(self.bytes.len() - 1), "expected ']'"));
        }
        self.pos += 1;
        Ok(expr)
    }

    fn bare_atom(&mut self) -> Option<Expr<AtomPrimitive>> {
        let c = self.peek()?;
        let sym =
            |element: Element, aromatic| Expr::Prim(AtomPrimitive::Symbol { element, aromatic });
        let expr = match (c, self.peek_at(1)) {
            (b'C', Some(b'l')) => {
                self.pos += 1;
                sym(Element::CL, false)
            }
            (b'B', Some(b'r')) => {
                self.pos += 1;
                sym(Element::BR, false)
            }
            (b'*', _) => Expr::Prim(AtomPrimitive::Any),
            (b'a', _) => Expr::Prim(AtomPrimitive::Aromatic),
            (b'A', _) => Expr::Prim(AtomPrimitive::Aliphatic),
            (b'B' | b'C' | b'N' | b'O' | b'P' | b'S' | b'F' | b'I', _) => sym(
                Element::from_symbol(&(c as char).to_string()).unwrap(),
                false,
            ),
            (b'b' | b'c' | b'n' | b'o' | b'p' | b's', _) => sym(
                Element::from_symbol(&(c.to_ascii_uppercase() as char).to_string()).unwrap(),
                true,
            ),
            _ => return None,
        };
        self.pos += 1;
        Some(expr)
    }

    fn bond_primitive(&mut self) -> Result<Expr<BondPrimitive>, SmartsError> {
        let start = self.pos;
        let prim = match self.peek() {
            Some(b'-') => BondPrimitive::Single,
            Some(b'=') => BondPrimitive::Double,
            Some(b'#') => BondPrimitive::Triple,
            Some(b':') => BondPrimitive::Aromatic,
            Some(b'~') => BondPrimitive::Any,
            Some(b'@') => BondPrimitive::Ring,
            Some(b'/' | b'\\') => return Err(unsupported(start, "directional bond")),
            _ => return Err(syntax(start, "expected a bond primitive")),
        };
        self.pos += 1;
        Ok(Expr::Prim(prim))
    }

    fn at_bond(&self) -> bool {
        matches!(
            self.peek(),
            Some(b'-' | b'=' | b'#' | b':' | b'~' | b'@' | b'!' | b'/' | b'\\')
        )
    }

    fn bond_expr(&mut self) -> Result<Expr<BondPrimitive>, SmartsError> {
        let stop = |c: u8| {
            !matches!(
                c,
                b'-' | b'=' | b'#' | b':' | b'~' | b'@' | b'!' | b'&' | b'/' | b'\\'
            )
        };
        let mut prim = |p: &mut Self| p.bond_primitive();
        self.low_and(&mut prim, &stop)
    }
}

fn default_bond(atoms: &[QueryAtom], a: usize, b: usize) -> Expr<BondPrimitive> {
    if atoms[a].implies_aromatic() && atoms[b].implies_aromatic() {
        Expr::Or(vec![
            Expr::Prim(BondPrimitive::Single),
            Expr::Prim(BondPrimitive::Aromatic),
        ])
    } else {
        Expr::Prim(BondPrimitive::Single)
    }
}

/// Compiles a SMARTS string.
pub fn parse_smarts(text: &str) -> Result<SmartsPattern, SmartsError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(SmartsError::Empty);
    }
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut atoms: Vec<QueryAtom> = Vec::new();
    let mut bonds: Vec<QueryBond> = Vec::new();
    let mut prev: Option<usize> = None;
    let mut pending: Option<(Expr<BondPrimitive>, usize)> = None;
    let mut branches: Vec<usize> = Vec::new();
    let mut rings: BTreeMap<u32, (usize, Option<Expr<BondPrimitive>>, usize)> = BTreeMap::new();

    let add_bond = |atoms: &[QueryAtom],
                    bonds: &mut Vec<QueryBond>,
                    a: usize,
                    b: usize,
                    expr: Option<Expr<BondPrimitive>>,
                    pos: usize| {
        if a == b
            || bonds
                .iter()
                .any(|q| (q.begin == a && q.end == b) || (q.begin == b && q.end == a))
        {
            return Err(syntax(pos, "duplicate or self bond"));
        }
        let expr = expr.unwrap_or_else(|| default_bond(atoms, a, b));
        bonds.push(QueryBond {
            begin: a,
            end: b,
            expr,
        });
        Ok(())
    };

    while let Some(c) = p.peek() {
        let pos = p.pos;
        if c == b'[' || p.bare_atom_start() {
            let expr = if c == b'[' {
                p.bracket_atom()?
            } else {
                p.bare_atom().expect("checked start")
            };
            atoms.push(QueryAtom { expr });
            let idx = atoms.len() - 1;
            match prev {
                Some(a) => {
                    let bond = pending.take().map(|(e, _)| e);
                    add_bond(&atoms, &mut bonds, a, idx, bond, pos)?;
                }
                None => {
                    if let Some((_, bpos)) = pending {
                        return Err(syntax(bpos, "bond without a preceding atom"));
                    }
                }
            }
            prev = Some(idx);
        } else if c == b'$' {
            return Err(unsupported(pos, "recursive SMARTS $(...)"));
        } else if p.at_bond() {
            if prev.is_none() || pending.is_some() {
                return Err(syntax(pos, "misplaced bond"));
            }
            pending = Some((p.bond_expr()?, pos));
        } else if c.is_ascii_digit() || c == b'%' {
            let label = if c == b'%' {
                p.pos += 1;
                let d = (p.peek_at(0), p.peek_at(1));
                match d {
                    (Some(a), Some(b)) if a.is_ascii_digit() && b.is_ascii_digit() => {
                        p.pos += 2;
                        ((a - b'0') * 10 + (b - b'0')) as u32
                    }
                    _ => return Err(syntax(pos, "'%' must be followed by two digits")),
                }
            } else {
                p.pos += 1;
                (c - b'0') as u32
            };
            let Some(atom) = prev else {
                return Err(syntax(pos, "ring closure without an atom"));
            };
            let bond = pending.take().map(|(e, _)| e);
            match rings.remove(&label) {
                Some((other, first, _)) => {
                    let expr = match (first, bond) {
                        (Some(a), Some(b)) if a != b => {
                            return Err(syntax(pos, "conflicting ring closure bonds"))
                        }
                        (Some(e), _) | (None, Some(e)) => Some(e),
                        (None, None) => None,
                    };
                    add_bond(&atoms, &mut bonds, other, atom, expr, pos)?;
                }
                None => {
                    rings.insert(label, (atom, bond, pos));
                }
            }
        } else if c == b'(' {
            let Some(atom) = prev else {
                return Err(syntax(pos, "branch without an atom"));
            };
            if pending.is_some() {
                return Err(syntax(pos, "bond before branch"));
            }
            p.pos += 1;
            branches.push(atom);
        } else if c == b')' {
            let Some(atom) = branches.pop() else {
                return Err(syntax(pos, "unbalanced ')'"));
            };
            if pending.is_some() {
                return Err(syntax(pos, "dangling bond"));
            }
            p.pos += 1;
            prev = Some(atom);
        } else if c == b'.' {
            if prev.is_none() || pending.is_some() {
                return Err(syntax(pos, "misplaced '.'"));
            }
            p.pos += 1;
            prev = None;
        } else {
            return Err(syntax(pos, format!("unexpected character {:?}", c as char)));
        }
    }
    if let Some((_, bpos)) = pending {
        return Err(syntax(bpos, "dangling bond"));
    }
    if !branches.is_empty() {
        return Err(syntax(text.len() - 1, "unclosed branch"));
    }
    if let Some((_, &(_, _, pos))) = rings.iter().next() {
        return Err(syntax(pos, "unclosed ring"));
    }
    if prev.is_none() {
        return Err(syntax(text.len() - 1, "pattern ends without an atom"));
    }

    let mut adjacency = vec![Vec::new(); atoms.len()];
    for (i, b) in bonds.iter().enumerate() {
        adjacency[b.begin].push((b.end, i));
        adjacency[b.end].push((b.begin, i));
    }
    Ok(SmartsPattern {
        source: text.to_string(),
        atoms,
        bonds,
        adjacency,
    })
}

impl Parser<'_> {
    fn bare_atom_start(&self) -> bool {
        matches!(
            self.peek(),
            Some(b'*' | b'a' | b'A' | b'B' | b'C' | b'N' | b'O' | b'P' | b'S' | b'F' | b'I')
                | Some(b'b' | b'c' | b'n' | b'o' | b'p' | b's')
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prim(p: AtomPrimitive) -> Expr<AtomPrimitive> {
        Expr::Prim(p)
    }

    #[test]
    fn hydroxyl_oxygen() {
        let p = parse_smarts("[OX2H]").unwrap();
        assert_eq!(p.num_atoms(), 1);
        assert_eq!(
            p.atoms()[0].expr,
            Expr::And(vec![
                prim(AtomPrimitive::Symbol {
                    element: Element::O,
                    aromatic: false
                }),
                prim(AtomPrimitive::Connectivity(2)),
                prim(AtomPrimitive::TotalH(1)),
            ])
        );
    }

    #[test]
    fn precedence() {
        let p = parse_smarts("[C,N;R]").unwrap();
        let c = prim(AtomPrimitive::Symbol {
            element: Element::C,
            aromatic: false,
        });
        let n = prim(AtomPrimitive::Symbol {
            element: Element::N,
            aromatic: false,
        });
        assert_eq!(
            p.atoms()[0].expr,
            Expr::And(vec![Expr::Or(vec![c, n]), prim(AtomPrimitive::InRing)])
        );
        // `&` binds tighter than `,`
        let p = parse_smarts("[C&R,N]").unwrap();
        assert!(matches!(&p.atoms()[0].expr, Expr::Or(v) if matches!(v[0], Expr::And(_))));
        let p = parse_smarts("[!C&R]").unwrap();
        assert!(matches!(&p.atoms()[0].expr, Expr::And(v) if matches!(v[0], Expr::Not(_))));
    }

    #[test]
    fn recursive_is_unsupported() {
        assert!(matches!(
            parse_smarts("$([CX3]=O)"),
            Err(SmartsError::UnsupportedPrimitive { position: 0, .. })
        ));
        assert!(matches!(
            parse_smarts("[$([CX3]=O)]"),
            Err(SmartsError::UnsupportedPrimitive { position: 1, .. })
        ));
        assert!(matches!(
            parse_smarts("[C@H]"),
            Err(SmartsError::UnsupportedPrimitive { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        for bad in ["[C", "C(", "C1CC", "C=", "[]", "[Q]", "C)"] {
            match parse_smarts(bad) {
                Err(SmartsError::Syntax { position, .. }) => assert!(position < bad.len(), "{bad}"),
                other => panic!("{bad}: {other:?}"),
            }
        }
    }

    #[test]
    fn bond_expressions() {
        let p = parse_smarts("C~C=,#C!@C").unwrap();
        assert_eq!(p.bonds()[0].expr, Expr::Prim(BondPrimitive::Any));
        assert!(matches!(&p.bonds()[1].expr, Expr::Or(v) if v.len() == 2));
        assert!(matches!(&p.bonds()[2].expr, Expr::Not(_)));
    }

    #[test]
    fn default_bonds() {
        let p = parse_smarts("cc").unwrap();
        assert!(matches!(&p.bonds()[0].expr, Expr::Or(_)));
        let p = parse_smarts("cC").unwrap();
        assert_eq!(p.bonds()[0].expr, Expr::Prim(BondPrimitive::Single));
    }

    #[test]
    fn hydrogen_atom_vs_count() {
        let p = parse_smarts("[H]").unwrap();
        assert_eq!(p.atoms()[0].expr, prim(AtomPrimitive::AtomicNumber(1)));
        let p = parse_smarts("[CH2]").unwrap();
        assert!(
            matches!(&p.atoms()[0].expr, Expr::And(v) if v[1] == prim(AtomPrimitive::TotalH(2)))
        );
    }
}
