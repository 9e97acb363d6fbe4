//! Textual polynomial format.
//!
//! A polynomial is a sum of terms such as `3*x1^2*x2 - 1/2*x3 + 7`.
//! Parentheses and integer powers of sub-expressions are accepted on input;
//! output is always the flat expanded form, which parses back to the same
//! value.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Exponent, Polynomial, Scalar};

/// Variable names used for parsing and printing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
}

impl VarNames {
    /// `t` for one variable, `x, y` and `x, y, z` for two and three, and
    /// `x1, ..., xn` otherwise.
    pub fn default_for(n: usize) -> Self {
        let names = match n {
            1 => vec!["t".to_string()],
            2 => vec!["x".to_string(), "y".to_string()],
            3 => vec!["x".to_string(), "y".to_string(), "z".to_string()],
            _ => (1..=n).map(|i| format!("x{i}")).collect(),
        };
        VarNames { names }
    }

    /// `prefix1, ..., prefixn`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        VarNames {
            names: (1..=n).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::parse(0, "no variable names given"));
        }
        for (i, name) in names.iter().enumerate() {
            let mut chars = name.chars();
            let ok = chars
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::parse(0, format!("invalid variable name `{name}`")));
            }
            if names[..i].contains(name) {
                return Err(Error::parse(0, format!("duplicate variable name `{name}`")));
            }
        }
        Ok(VarNames { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Resolves a variable name. Besides the configured names, `x1..xn` are
    /// always accepted, `x, y, z` for `n <= 3` and `t` for `n = 1`.
    pub fn lookup(&self, name: &str) -> Option<usize> {
        let n = self.names.len();
        if let Some(i) = self.names.iter().position(|s| s == name) {
            return Some(i);
        }
        if let Some(k) = name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
            if (1..=n).contains(&k) && !name[1..].starts_with('0') {
                return Some(k - 1);
            }
        }
        match name {
            "x" if n <= 3 => Some(0),
            "y" if (2..=3).contains(&n) => Some(1),
            "z" if n == 3 => Some(2),
            "t" if n == 1 => Some(0),
            _ => None,
        }
    }

    pub fn format_monomial(&self, e: &Exponent) -> String {
        let mut parts = Vec::new();
        for (i, &k) in e.coords().iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                _ => parts.push(format!("{}^{}", self.names[i], k)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Flat text form; terms by ascending total degree, then descending
    /// lexicographic exponent.
    pub fn format(&self, f: &Polynomial) -> String {
        let mut terms: Vec<(&Exponent, &Scalar)> = f.terms().collect();
        terms.sort_by(|(a, _), (b, _)| display_order(a, b));
        let mut out = String::new();
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            let body = if e.is_zero() {
                abs.to_string()
            } else if abs.is_one() {
                self.format_monomial(e)
            } else {
                format!("{}*{}", abs, self.format_monomial(e))
            };
            match (k, negative) {
                (0, false) => {}
                (0, true) => out.push('-'),
                (_, false) => out.push_str(" + "),
                (_, true) => out.push_str(" - "),
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn display_order(a: &Exponent, b: &Exponent) -> Ordering {
    a.total_degree()
        .cmp(&b.total_degree())
        .then_with(|| b.cmp(a))
}

/// Parses `text` as a polynomial in the variables of `names`.
pub fn parse_polynomial(text: &str, names: &VarNames) -> Result<Polynomial> {
    let mut parser = Parser {
        src: text,
        pos: 0,
        names,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < text.len() {
        return Err(Error::parse(parser.pos, "unexpected trailing input"));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a VarNames,
}

impl Parser<'_> {
    fn n(&self) -> usize {
        self.names.len()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.n());
        let mut negate = false;
        if self.eat('-') {
            negate = true;
        } else {
            self.eat('+');
        }
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            let start = self.pos;
            let digits = self.digits();
            let k: u32 = digits
                .parse()
                .map_err(|_| Error::parse(start, "expected a non-negative integer exponent"))?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }

    fn digits(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::parse(self.pos, "expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits parse");
                let mut value = Scalar::from_integer(num);
                if self.eat('/') {
                    let dstart = self.pos;
                    let den: BigInt = self
                        .digits()
                        .parse()
                        .map_err(|_| Error::parse(dstart, "expected a denominator"))?;
                    if den.is_zero() {
                        return Err(Error::parse(dstart, "zero denominator"));
                    }
                    value /= Scalar::from_integer(den);
                }
                Ok(Polynomial::constant(self.n(), value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                while self
                    .peek_raw()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                let i = self
                    .names
                    .lookup(name)
                    .ok_or_else(|| Error::parse(start, format!("unknown variable `{name}`")))?;
                Ok(Polynomial::var(self.n(), i))
            }
            Some(c) => Err(Error::parse(start, format!("unexpected character `{c}`"))),
            None => Err(Error::parse(start, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::new(n.into(), d.into())
    }

    #[test]
    fn parses_and_prints() {
        let names = VarNames::default_for(2);
        let f = parse_polynomial("3*x^2*y + 3*x*y^2 + y^3", &names).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(names.format(&f), "3*x^2*y + 3*x*y^2 + y^3");
        let g = parse_polynomial("(x + y)^2 - x^2", &names).unwrap();
        assert_eq!(names.format(&g), "2*x*y + y^2");
        let h = parse_polynomial("-1/2*x1 + 7 - x2^3", &names).unwrap();
        assert_eq!(names.format(&h), "7 - 1/2*x - y^3");
        assert_eq!(names.format(&Polynomial::zero(2)), "0");
    }

    #[test]
    fn aliases() {
        let one = VarNames::default_for(1);
        assert_eq!(
            parse_polynomial("t^4", &one).unwrap(),
            parse_polynomial("x1^4", &one).unwrap()
        );
        let four = VarNames::default_for(4);
        assert!(parse_polynomial("x4*x1", &four).is_ok());
        assert!(parse_polynomial("y", &four).is_err());
        assert!(parse_polynomial("x5", &four).is_err());
        let custom = VarNames::new(vec!["u".into(), "v".into()]).unwrap();
        let f = parse_polynomial("u*v + x2", &custom).unwrap();
        assert_eq!(custom.format(&f), "v + u*v");
        assert!(VarNames::new(vec!["u".into(), "u".into()]).is_err());
    }

    #[test]
    fn reports_error_offsets() {
        let names = VarNames::default_for(2);
        assert_eq!(
            parse_polynomial("x + w", &names),
            Err(Error::parse(4, "unknown variable `w`"))
        );
        assert!(matches!(
            parse_polynomial("x +", &names),
            Err(Error::Parse { offset: 3, .. })
        ));
        assert!(parse_polynomial("(x", &names).is_err());
        assert!(parse_polynomial("1/0", &names).is_err());
        assert!(parse_polynomial("x y", &names).is_err());
    }

    #[test]
    fn rational_coefficients() {
        let names = VarNames::default_for(1);
        let f = parse_polynomial("t^13 - 1/2*t^15", &names).unwrap();
        assert_eq!(f.coefficient(&Exponent::new(vec![15])), q(-1, 2));
        assert_eq!(names.format(&f), "t^13 - 1/2*t^15");
    }

    proptest! {
        #[test]
        fn printing_round_trips(
            n in 1usize..5,
            terms in prop::collection::vec(
                (prop::collection::vec(0u32..5, 4), -20i64..20, 1i64..6), 0..7)
        ) {
            let names = VarNames::default_for(n);
            let f = Polynomial::from_terms(
                n,
                terms.into_iter().map(|(e, a, b)| (Exponent::new(e[..n].to_vec()), q(a, b))),
            ).unwrap();
            let printed = names.format(&f);
            prop_assert_eq!(parse_polynomial(&printed, &names).unwrap(), f);
        }
    }
}
