use std::ops::Range;

use crate::error::SmilesError;
use crate::mol::Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BondSymbol {
    Single,
    Double,
    Triple,
    Aromatic,
    /// `/` or `\`: treated as single, stereo dropped.
    Directional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BracketAtom {
    pub isotope: Option<u16>,
    pub element: Element,
    pub aromatic: bool,
    pub chiral: bool,
    pub hydrogens: u8,
    pub charge: i8,
    pub map: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    OrganicAtom { element: Element, aromatic: bool },
    BracketAtom(BracketAtom),
    Bond(BondSymbol),
    RingClosure(u32),
    BranchOpen,
    BranchClose,
    Dot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmilesToken {
    pub kind: TokenKind,
    /// Byte range in the tokenized text.
    pub span: Range<usize>,
}

struct Lexer<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

fn syntax(position: usize, message: impl Into<String>) -> SmilesError {
    SmilesError::Syntax {
        position,
        message: message.into(),
    }
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<u8> {
        self.bytes.get(self.pos + offset).copied()
    }

    fn digits(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        // saturate absurd digit runs instead of overflowing
        Some(self.text[start..self.pos].parse().unwrap_or(u32::MAX))
    }

    fn organic(&mut self) -> Option<TokenKind> {
        let c = self.peek()?;
        let two = match (c, self.peek_at(1)) {
            (b'C', Some(b'l')) => Some(Element::CL),
            (b'B', Some(b'r')) => Some(Element::BR),
            _ => None,
        };
        if let Some(element) = two {
            self.pos += 2;
            return Some(TokenKind::OrganicAtom {
                element,
                aromatic: false,
            });
        }
        let (element, aromatic) = match c {
            b'B' => (Element::B, false),
            b'C' => (Element::C, false),
            b'N' => (Element::N, false),
            b'O' => (Element::O, false),
            b'P' => (Element::P, false),
            b'S' => (Element::S, false),
            b'F' => (Element::F, false),
            b'I' => (Element::I, false),
            b'b' => (Element::B, true),
            b'c' => (Element::C, true),
            b'n' => (Element::N, true),
            b'o' => (Element::O, true),
            b'p' => (Element::P, true),
            b's' => (Element::S, true),
            _ => return None,
        };
        self.pos += 1;
        Some(TokenKind::OrganicAtom { element, aromatic })
    }

    fn bracket_symbol(&mut self) -> Result<(Element, bool), SmilesError> {
        let start = self.pos;
        let rest = &self.text[self.pos..];
        for (sym, el) in [("se", 34), ("as", 33), ("te", 52)] {
            if rest.starts_with(sym) {
                self.pos += 2;
                return Ok((Element::new(el).unwrap(), true));
            }
        }
        match self.peek() {
            Some(c @ (b'b' | b'c' | b'n' | b'o' | b'p' | b's')) => {
                self.pos += 1;
                let el = Element::from_symbol(&(c.to_ascii_uppercase() as char).to_string());
                return Ok((el.unwrap(), true));
            }
            Some(c) if c.is_ascii_uppercase() => {
                if let Some(n) = self.peek_at(1).filter(|n| n.is_ascii_lowercase()) {
                    let sym = format!("{}{}", c as char, n as char);
                    if let Some(el) = Element::from_symbol(&sym) {
                        self.pos += 2;
                        return Ok((el, false));
                    }
                }
                if let Some(el) = Element::from_symbol(&(c as char).to_string()) {
                    self.pos += 1;
                    return Ok((el, false));
                }
            }
            _ => {}
        }
        Err(syntax(start, "unknown element symbol in bracket atom"))
    }

    fn bracket(&mut self) -> Result<TokenKind, SmilesError> {
        let open = self.pos;
        self.pos += 1;
        let isotope = match self.digits() {
            Some(v) if v > u16::MAX as u32 => return Err(syntax(open + 1, "isotope too large")),
            v => v.map(|v| v as u16),
        };
        let (element, aromatic) = self.bracket_symbol()?;
        let mut chiral = false;
        while self.peek() == Some(b'@') {
            chiral = true;
            self.pos += 1;
        }
        let mut hydrogens = 0u8;
        if self.peek() == Some(b'H') {
            self.pos += 1;
            let here = self.pos;
            hydrogens = match self.digits() {
                Some(v) if v > 9 => return Err(syntax(here, "hydrogen count too large")),
                Some(v) => v as u8,
                None => 1,
            };
        }
        let mut charge = 0i32;
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            let at = self.pos;
            let unit = if sign == b'+' { 1 } else { -1 };
            self.pos += 1;
            if let Some(v) = self.digits() {
                charge = unit * v.min(i32::MAX as u32) as i32;
            } else {
                charge = unit;
                while self.peek() == Some(sign) {
                    self.pos += 1;
                    charge += unit;
                }
            }
            if charge.abs() > 15 {
                return Err(SmilesError::ChargeOverflow {
                    position: at,
                    charge,
                });
            }
        }
        let mut map = None;
        if self.peek() == Some(b':') {
            self.pos += 1;
            let here = self.pos;
            map = Some(
                self.digits()
                    .ok_or_else(|| syntax(here, "expected atom map number"))?,
            );
        }
        if self.peek() != Some(b']') {
            return Err(syntax(
                self.pos.min(self.bytes.len().saturating_sub(1)),
                "expected ']'",
            ));
        }
        self.pos += 1;
        Ok(TokenKind::BracketAtom(BracketAtom {
            isotope,
            element,
            aromatic,
            chiral,
            hydrogens,
            charge: charge as i8,
            map,
        }))
    }

    fn next_token(&mut self) -> Option<Result<SmilesToken, SmilesError>> {
        let start = self.pos;
        let c = self.peek()?;
        let kind = match c {
            b'[' => match self.bracket() {
                Ok(k) => k,
                Err(e) => return Some(Err(e)),
            },
            b'(' => {
                self.pos += 1;
                TokenKind::BranchOpen
            }
            b')' => {
                self.pos += 1;
                TokenKind::BranchClose
            }
            b'.' => {
                self.pos += 1;
                TokenKind::Dot
            }
            b'-' | b'=' | b'#' | b':' | b'/' | b'\\' => {
                self.pos += 1;
                TokenKind::Bond(match c {
                    b'-' => BondSymbol::Single,
                    b'=' => BondSymbol::Double,
                    b'#' => BondSymbol::Triple,
                    b':' => BondSymbol::Aromatic,
                    _ => BondSymbol::Directional,
                })
            }
            b'0'..=b'9' => {
                self.pos += 1;
                TokenKind::RingClosure((c - b'0') as u32)
            }
            b'%' => {
                let (d1, d2) = (self.peek_at(1), self.peek_at(2));
                match (d1, d2) {
                    (Some(a), Some(b)) if a.is_ascii_digit() && b.is_ascii_digit() => {
                        self.pos += 3;
                        TokenKind::RingClosure(((a - b'0') * 10 + (b - b'0')) as u32)
                    }
                    _ => return Some(Err(syntax(start, "'%' must be followed by two digits"))),
                }
            }
            _ => match self.organic() {
                Some(k) => k,
                None => {
                    let ch = self.text[start..].chars().next().unwrap_or('?');
                    return Some(Err(syntax(start, format!("unexpected character {ch:?}"))));
                }
            },
        };
        Some(Ok(SmilesToken {
            kind,
            span: start..self.pos,
        }))
    }
}

/// Splits SMILES text into tokens whose spans tile the input.
pub fn tokenize(text: &str) -> Result<Vec<SmilesToken>, SmilesError> {
    let mut lexer = Lexer {
        text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    while let Some(tok) = lexer.next_token() {
        out.push(tok?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_tile_input() {
        let text = "C[13CH2+]Cl%12c1Br(=O)";
        let toks = tokenize(text).unwrap();
        let mut pos = 0;
        for t in &toks {
            assert_eq!(t.span.start, pos);
            pos = t.span.end;
        }
        assert_eq!(pos, text.len());
    }

    #[test]
    fn bracket_fields() {
        let toks = tokenize("[13CH3+:7]").unwrap();
        let TokenKind::BracketAtom(b) = toks[0].kind else {
            panic!("expected bracket atom")
        };
        assert_eq!(b.isotope, Some(13));
        assert_eq!(b.element, Element::C);
        assert_eq!(b.hydrogens, 3);
        assert_eq!(b.charge, 1);
        assert_eq!(b.map, Some(7));
    }

    #[test]
    fn charge_forms() {
        for (text, q) in [("[O-]", -1), ("[Fe++]", 2), ("[Fe+3]", 3), ("[N--]", -2)] {
            let toks = tokenize(text).unwrap();
            let TokenKind::BracketAtom(b) = toks[0].kind else {
                panic!()
            };
            assert_eq!(b.charge, q, "{text}");
        }
        assert!(matches!(
            tokenize("[C+16]"),
            Err(SmilesError::ChargeOverflow {
                position: 2,
                charge: 16
            })
        ));
    }

    #[test]
    fn unknown_symbol_has_position() {
        assert!(matches!(
            tokenize("CCX"),
            Err(SmilesError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            tokenize("C[Xy]"),
            Err(SmilesError::Syntax { position: 2, .. })
        ));
    }
}
