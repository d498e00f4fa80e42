//! Polygon expressions.
//!
//! ```text
//! expr := term ("+" term)*
//! term := atom ("^" posint)?
//! atom := "ord" | "ss" | "sigma" posint | "nu" posint | "G(" int "," int ")"
//! ```
//!
//! Whitespace is ignored everywhere. Error offsets refer to the original text.

use super::{NewtonPolygon, PolygonError};

pub fn parse(text: &str) -> Result<NewtonPolygon, PolygonError> {
    let chars: Vec<(usize, u8)> = text
        .bytes()
        .enumerate()
        .filter(|(_, b)| !b.is_ascii_whitespace())
        .collect();
    let mut parser = Parser {
        chars,
        pos: 0,
        end: text.len(),
    };
    let triples = parser.expr()?;
    NewtonPolygon::make(&triples)
}

struct Parser {
    chars: Vec<(usize, u8)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(o, _)| o)
    }

    fn peek(&self) -> Option<u8> {
        self.chars.get(self.pos).map(|&(_, b)| b)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, PolygonError> {
        Err(PolygonError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat_keyword(&mut self, word: &str) -> bool {
        let bytes = word.as_bytes();
        let matches = bytes
            .iter()
            .enumerate()
            .all(|(i, b)| self.chars.get(self.pos + i).map(|&(_, c)| c) == Some(*b));
        if matches {
            self.pos += bytes.len();
        }
        matches
    }

    fn expect(&mut self, byte: u8) -> Result<(), PolygonError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{}'", byte as char))
        }
    }

    fn int(&mut self) -> Result<u32, PolygonError> {
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(b @ b'0'..=b'9') = self.peek() {
            value = match value
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as u32))
            {
                Some(v) => v,
                None => {
                    self.pos = start;
                    return self.error("integer too large");
                }
            };
            self.pos += 1;
        }
        if self.pos == start {
            return self.error("expected integer");
        }
        Ok(value)
    }

    fn posint(&mut self) -> Result<u32, PolygonError> {
        let start = self.pos;
        let v = self.int()?;
        if v == 0 {
            self.pos = start;
            return self.error("expected positive integer");
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<Vec<(u32, u32, u32)>, PolygonError> {
        let mut out = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            out.extend(self.term()?);
        }
        if self.pos != self.chars.len() {
            return self.error("unexpected character");
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Vec<(u32, u32, u32)>, PolygonError> {
        let atom = self.atom()?;
        let power = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.posint()?
        } else {
            1
        };
        atom.into_iter()
            .map(|(c, d, m)| {
                m.checked_mul(power)
                    .map(|m| (c, d, m))
                    .ok_or(PolygonError::Overflow)
            })
            .collect()
    }

    fn atom(&mut self) -> Result<Vec<(u32, u32, u32)>, PolygonError> {
        if self.eat_keyword("ord") {
            Ok(vec![(0, 1, 1), (1, 0, 1)])
        } else if self.eat_keyword("ss") {
            Ok(vec![(1, 1, 1)])
        } else if self.eat_keyword("sigma") {
            let g = self.posint()?;
            Ok(vec![(1, 1, g)])
        } else if self.eat_keyword("nu") {
            let d = self.posint()?;
            if d < 3 {
                return Err(PolygonError::NuTooSmall { d });
            }
            Ok(vec![(1, d - 1, 1), (d - 1, 1, 1)])
        } else if self.eat_keyword("G") {
            self.expect(b'(')?;
            let c = self.int()?;
            self.expect(b',')?;
            let d = self.int()?;
            self.expect(b')')?;
            Ok(vec![(c, d, 1)])
        } else {
            self.error("expected 'ord', 'ss', 'sigma', 'nu' or 'G('")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::enumerate;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let xi = parse("ord^2+ss^3").unwrap();
        assert_eq!((xi.genus(), xi.p_rank()), (5, 2));
        assert_eq!(
            parse("nu3+ss").unwrap(),
            parse("G(1,2)+G(2,1)+G(1,1)").unwrap()
        );
        assert_eq!(parse("nu2"), Err(PolygonError::NuTooSmall { d: 2 }));
        assert_eq!(parse("sigma1").unwrap(), parse("ss").unwrap());
        assert_eq!(parse(" sigma 4 ").unwrap(), parse("ss^4").unwrap());
        assert_eq!(parse("G( 2 , 1 ) + G(1,2)").unwrap(), parse("nu3").unwrap());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert!(matches!(
            parse(""),
            Err(PolygonError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse("ord+"),
            Err(PolygonError::Syntax { offset: 4, .. })
        ));
        assert!(matches!(
            parse("ord ^0"),
            Err(PolygonError::Syntax { offset: 5, .. })
        ));
        assert!(matches!(
            parse("ss*2"),
            Err(PolygonError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse("G(1;2)"),
            Err(PolygonError::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            parse("foo"),
            Err(PolygonError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse("sigma"),
            Err(PolygonError::Syntax { offset: 5, .. })
        ));
        assert!(matches!(
            parse("ss^99999999999"),
            Err(PolygonError::Syntax { offset: 3, .. })
        ));
    }

    #[test]
    fn semantic_errors() {
        assert!(matches!(
            parse("G(1,2)"),
            Err(PolygonError::NotSymmetric { .. })
        ));
        assert!(matches!(
            parse("G(2,2)"),
            Err(PolygonError::NonCoprime { .. })
        ));
        assert!(matches!(
            parse("G(0,0)"),
            Err(PolygonError::NonCoprime { .. })
        ));
    }

    #[test]
    fn format_parse_roundtrip_enumerated() {
        for g in 1..=8 {
            for xi in enumerate(g) {
                let text = xi.format();
                assert_eq!(parse(&text).unwrap(), xi, "{text}");
                assert_eq!(parse(&text).unwrap().format(), text);
            }
        }
    }

    fn arb_polygon() -> impl Strategy<Value = crate::polygon::NewtonPolygon> {
        (1u32..=7).prop_flat_map(|g| {
            let polys = enumerate(g);
            (0..polys.len()).prop_map(move |i| polys[i].clone())
        })
    }

    proptest! {
        #[test]
        fn direct_sum_laws(a in arb_polygon(), b in arb_polygon(), c in arb_polygon()) {
            let ab = a.direct_sum(&b);
            prop_assert_eq!(&ab, &b.direct_sum(&a));
            prop_assert_eq!(ab.direct_sum(&c), a.direct_sum(&b.direct_sum(&c)));
            prop_assert_eq!(ab.genus(), a.genus() + b.genus());
            prop_assert_eq!(ab.p_rank(), a.p_rank() + b.p_rank());
            prop_assert_eq!(parse(&ab.format()).unwrap(), ab.clone());
            let v = ab.vertices();
            prop_assert_eq!(v[0], (0, 0));
            prop_assert_eq!(*v.last().unwrap(), (2 * ab.genus(), ab.genus()));
        }

        #[test]
        fn whitespace_is_ignored(a in arb_polygon(), seed in any::<u64>()) {
            let text = a.format();
            let mut spaced = String::new();
            for (i, ch) in text.chars().enumerate() {
                if (seed >> (i % 64)) & 1 == 1 {
                    spaced.push(' ');
                }
                spaced.push(ch);
            }
            prop_assert_eq!(parse(&spaced).unwrap(), a);
        }
    }
}
