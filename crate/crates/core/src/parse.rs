//! Monomial expression parsing.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! generators := monomial (',' monomial)*
//! monomial   := factor ('*' factor)*
//! factor     := identifier ('^' uint)?
//! identifier := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! Irreducibles are registered in order of first appearance. Input files may instead be a
//! JSON object `{"variables": [...], "generators": ["x^2", ...]}`, in which case the
//! variable order is the listed one.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, Presentation};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: Vec<String>,
    closed: bool,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, names: Vec<String>, closed: bool) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            names,
            closed,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn identifier(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            Some(_) => return Err(self.err("expected an identifier")),
            None => return Err(self.err("unexpected end of input, expected an identifier")),
        }
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i);
        }
        if self.closed {
            return Err(Error::UnknownVariable(name.to_string()));
        }
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an exponent"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value: u32 = text.parse().map_err(|_| Error::Syntax {
            position: start,
            message: format!("exponent `{text}` is too large"),
        })?;
        if value == 0 {
            return Err(Error::Syntax {
                position: start,
                message: "exponents must be positive".to_string(),
            });
        }
        Ok(value)
    }

    /// A monomial as sparse `(irreducible, exponent)` factors.
    fn monomial(&mut self) -> Result<Vec<(usize, u32)>> {
        let mut factors = Vec::new();
        loop {
            let var = self.identifier()?;
            let exp = if self.peek() == Some(b'^') {
                self.pos += 1;
                self.uint()?
            } else {
                1
            };
            factors.push((var, exp));
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok(factors);
            }
        }
    }

    fn generators(&mut self) -> Result<Vec<Vec<(usize, u32)>>> {
        let mut gens = vec![self.monomial()?];
        loop {
            match self.peek() {
                None => return Ok(gens),
                Some(b',') => {
                    self.pos += 1;
                    gens.push(self.monomial()?);
                }
                Some(c) => {
                    return Err(self.err(format!("unexpected character `{}`", c as char)));
                }
            }
        }
    }

    fn finish(self, sparse: Vec<Vec<(usize, u32)>>) -> (Vec<String>, Vec<Monomial>) {
        let d = self.names.len();
        let gens = sparse
            .into_iter()
            .map(|factors| {
                let mut exps = vec![0u32; d];
                for (v, e) in factors {
                    exps[v] += e;
                }
                Monomial::new(exps)
            })
            .collect();
        (self.names, gens)
    }
}

fn parse_raw(text: &str) -> Result<(Vec<String>, Vec<Monomial>)> {
    let mut parser = Parser::new(text, Vec::new(), false);
    if parser.peek().is_none() {
        return Err(Error::Empty);
    }
    let sparse = parser.generators()?;
    Ok(parser.finish(sparse))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonInput {
    variables: Vec<String>,
    generators: Vec<String>,
}

fn parse_json_raw(text: &str) -> Result<(Vec<String>, Vec<Monomial>)> {
    let input: JsonInput = serde_json::from_str(text)?;
    for (i, name) in input.variables.iter().enumerate() {
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::Syntax {
                position: 0,
                message: format!("`{name}` is not a valid identifier"),
            });
        }
        if input.variables[..i].contains(name) {
            return Err(Error::DuplicateVariable(name.clone()));
        }
    }
    let mut names = input.variables;
    let mut sparse = Vec::with_capacity(input.generators.len());
    for g in &input.generators {
        let mut parser = Parser::new(g, names, true);
        let m = parser.monomial()?;
        if let Some(c) = parser.peek() {
            return Err(parser.err(format!("unexpected character `{}`", c as char)));
        }
        names = parser.names;
        sparse.push(m);
    }
    Ok(Parser::new("", names, true).finish(sparse))
}

/// Parses and validates a generator list in the plain grammar.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let (names, gens) = parse_raw(text)?;
    Presentation::new(names, gens)
}

/// Parses either input format (JSON objects are recognised by a leading `{`).
///
/// With `reduce`, dominated generators are dropped instead of rejected; the returned list
/// names each dropped generator and the generator dividing it (1-based).
pub fn parse_input(text: &str, reduce: bool) -> Result<(Presentation, Vec<(usize, usize)>)> {
    let (names, gens) = if text.trim_start().starts_with('{') {
        parse_json_raw(text)?
    } else {
        parse_raw(text)?
    };
    if reduce {
        Presentation::new_reduced(names, gens)
    } else {
        Ok((Presentation::new(names, gens)?, Vec::new()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn squared_ends_parses() {
        let p = parse_presentation("x^2, x*y, y*z, z*w, w^2").unwrap();
        assert_eq!(p.d(), 4);
        assert_eq!(p.n(), 5);
        let exps: Vec<&[u32]> = p.generators().iter().map(|g| g.exponents()).collect();
        assert_eq!(
            exps,
            vec![&[2, 0, 0, 0][..], &[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[0, 0, 0, 2]]
        );
    }

    #[test]
    fn hypersurface() {
        let p = parse_presentation("x^2").unwrap();
        assert_eq!((p.n(), p.d()), (1, 1));
    }

    #[test]
    fn minimality_violation() {
        match parse_presentation("x*y, x^2*y") {
            Err(Error::NotMinimal { divisor, multiple }) => assert_eq!((divisor, multiple), (1, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degree_one_rejected() {
        assert!(matches!(
            parse_presentation("x, y^2"),
            Err(Error::LowDegree { generator: 1, degree: 1 })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_presentation("x^2, *y") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_presentation("x^"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_presentation("x^0*y^2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_presentation("x^2 y"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_presentation("   "), Err(Error::Empty)));
        assert!(matches!(parse_presentation("x^2,"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn whitespace_and_repeated_factors() {
        let p = parse_presentation("  x * x ,\n y ^ 3 ").unwrap();
        assert_eq!(p.render(), "x^2, y^3");
    }

    #[test]
    fn json_input() {
        let (p, dropped) =
            parse_input(r#"{"variables": ["w", "x"], "generators": ["x^2", "x*w"]}"#, false)
                .unwrap();
        assert!(dropped.is_empty());
        assert_eq!(p.irreducible_names(), &["w".to_string(), "x".to_string()]);
        assert_eq!(p.generator(0).exponents(), &[0, 2]);
        assert!(matches!(
            parse_input(r#"{"variables": ["x"], "generators": ["x*y"]}"#, false),
            Err(Error::UnknownVariable(_))
        ));
        assert!(matches!(
            parse_input(r#"{"variables": ["x"], "generators": 3}"#, false),
            Err(Error::Json(_))
        ));
    }

    #[test]
    fn reduce_flag() {
        let (p, dropped) = parse_input("x*y, x^2*y, z^2", true).unwrap();
        assert_eq!(p.render(), "x*y, z^2");
        assert_eq!(dropped, vec![(2, 1)]);
    }

    fn arb_presentation() -> impl Strategy<Value = Presentation> {
        prop::collection::vec(prop::collection::vec(0u32..4, 4), 1..6).prop_filter_map(
            "not a valid presentation",
            |rows| {
                let names = ["a", "b1", "c_2", "D"].iter().map(|s| s.to_string()).collect();
                let gens = rows.into_iter().map(Monomial::new).collect();
                let (p, _) = Presentation::new_reduced(names, gens).ok()?;
                // keep only presentations where every irreducible occurs
                let used = (0..p.d()).all(|v| p.generators().iter().any(|g| g.exponents()[v] > 0));
                used.then_some(p)
            },
        )
    }

    proptest! {
        #[test]
        fn render_then_parse_is_canonical(p in arb_presentation()) {
            // rendering lists irreducibles per generator, so the first reparse may
            // reorder variables; after that the text is a fixed point
            let q = parse_presentation(&p.render()).unwrap();
            for (g, h) in p.generators().iter().zip(q.generators()) {
                for (v, name) in p.irreducible_names().iter().enumerate() {
                    let w = q.irreducible_names().iter().position(|m| m == name).unwrap();
                    prop_assert_eq!(g.exponents()[v], h.exponents()[w]);
                }
            }
            let r = parse_presentation(&q.render()).unwrap();
            prop_assert_eq!(r.render(), q.render());
            prop_assert_eq!(&q, &r);
        }
    }
}
