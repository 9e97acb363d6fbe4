//! Algebra files, variable names and the small list formats taken on the
//! command line.
//!
//! The text format is line based:
//!
//! ```text
//! # comment
//! vars: x, y
//! gens:
//!   x + y
//!   x*y; x*y^2
//! weight: 1,2
//! order: grlex
//! varorder: x, y
//! cap: 30
//! ```
//!
//! A file whose first non-blank character is `{` is read as JSON with the
//! same keys; `vars` and `gens` are string arrays there, the other keys may
//! be strings or numbers.

use std::collections::BTreeSet;

use canonfan_core::{parse_polynomial, Error, Exponent, Polynomial, VarNames};
use serde::Deserialize;

/// Where a generator came from, for error messages.
#[derive(Clone, Debug)]
pub enum Origin {
    /// 1-based line and column in a text file.
    Line(usize, usize),
    /// Index into the JSON `gens` array.
    Index(usize),
}

#[derive(Clone, Debug, Default)]
pub struct AlgebraFile {
    pub vars: Option<Vec<String>>,
    pub gens: Vec<(String, Origin)>,
    pub weight: Option<String>,
    pub order: Option<String>,
    pub varorder: Option<String>,
    pub cap: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Loose {
    Text(String),
    Number(serde_json::Number),
    List(Vec<Loose>),
}

impl Loose {
    fn flatten(&self) -> String {
        match self {
            Loose::Text(s) => s.clone(),
            Loose::Number(n) => n.to_string(),
            Loose::List(items) => items.iter().map(Loose::flatten).collect::<Vec<_>>().join(","),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonAlgebra {
    vars: Option<Vec<String>>,
    gens: Vec<String>,
    weight: Option<Loose>,
    order: Option<String>,
    varorder: Option<Loose>,
    cap: Option<Loose>,
}

impl AlgebraFile {
    /// Parses file contents; `label` prefixes error locations.
    pub fn parse(src: &str, label: &str) -> Result<AlgebraFile, String> {
        if src.trim_start().starts_with('{') {
            return Self::parse_json(src, label);
        }
        let mut file = AlgebraFile::default();
        let mut in_gens = false;
        for (k, raw) in src.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let (body, body_col) = match line.split_once(':') {
                Some((key, value)) => {
                    let key = key.trim();
                    let col = line.len() - value.len() + 1;
                    in_gens = false;
                    match key {
                        "vars" => {
                            let names = value
                                .split(',')
                                .map(|s| s.trim().to_string())
                                .filter(|s| !s.is_empty())
                                .collect();
                            file.vars = Some(names);
                            continue;
                        }
                        "gens" => {
                            in_gens = true;
                            (value, col)
                        }
                        "weight" | "order" | "varorder" | "cap" => {
                            let v = Some(value.trim().to_string());
                            match key {
                                "weight" => file.weight = v,
                                "order" => file.order = v,
                                "varorder" => file.varorder = v,
                                _ => file.cap = v,
                            }
                            continue;
                        }
                        other => {
                            return Err(format!("{label}:{line_no}:1: unknown key `{other}`"));
                        }
                    }
                }
                None if in_gens => (line, 1),
                None => {
                    return Err(format!(
                        "{label}:{line_no}:1: expected `key: value` or a generator after `gens:`"
                    ));
                }
            };
            let mut col = body_col;
            for piece in body.split(';') {
                let lead = piece.len() - piece.trim_start().len();
                if !piece.trim().is_empty() {
                    file.gens.push((piece.trim().to_string(), Origin::Line(line_no, col + lead)));
                }
                col += piece.len() + 1;
            }
        }
        if file.gens.is_empty() {
            return Err(format!("{label}: no generators (missing `gens:` section)"));
        }
        Ok(file)
    }

    fn parse_json(src: &str, label: &str) -> Result<AlgebraFile, String> {
        let j: JsonAlgebra = serde_json::from_str(src)
            .map_err(|e| format!("{label}:{}:{}: {e}", e.line(), e.column()))?;
        if j.gens.is_empty() {
            return Err(format!("{label}: `gens` is empty"));
        }
        Ok(AlgebraFile {
            vars: j.vars,
            gens: j
                .gens
                .into_iter()
                .enumerate()
                .map(|(i, g)| (g, Origin::Index(i)))
                .collect(),
            weight: j.weight.as_ref().map(Loose::flatten),
            order: j.order,
            varorder: j.varorder.as_ref().map(Loose::flatten),
            cap: j.cap.as_ref().map(Loose::flatten),
        })
    }

    /// Names from the file, or inferred from the generators.
    pub fn names(&self, label: &str) -> Result<VarNames, String> {
        match &self.vars {
            Some(v) => VarNames::new(v.clone()).map_err(|e| format!("{label}: vars: {}", plain(&e))),
            None => infer_names(self.gens.iter().map(|(s, _)| s.as_str()))
                .map_err(|e| format!("{label}: {e}")),
        }
    }

    pub fn polynomials(&self, names: &VarNames, label: &str) -> Result<Vec<Polynomial>, String> {
        self.gens
            .iter()
            .map(|(text, origin)| {
                parse_polynomial(text, names).map_err(|e| {
                    let offset = match &e {
                        Error::Parse { offset, .. } => *offset,
                        _ => 0,
                    };
                    match origin {
                        Origin::Line(l, c) => format!("{label}:{l}:{}: {}", c + offset, plain(&e)),
                        Origin::Index(i) => {
                            format!("{label}: gens[{i}] at byte {offset}: {}", plain(&e))
                        }
                    }
                })
            })
            .collect()
    }
}

/// The message of a parse error without its byte offset.
pub fn plain(e: &Error) -> String {
    match e {
        Error::Parse { message, .. } => message.clone(),
        other => other.to_string(),
    }
}

/// Picks variable names from the identifiers in `texts`: `t` alone,
/// a prefix of `x, y, z`, or indexed `x1, x2, ...`.
pub fn infer_names<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<VarNames, String> {
    let mut ids = BTreeSet::new();
    for text in texts {
        let mut chars = text.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if c.is_ascii_alphabetic() || c == '_' {
                let mut end = i + c.len_utf8();
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = j + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                ids.insert(text[i..end].to_string());
            }
        }
    }
    let fail = || {
        let list: Vec<&str> = ids.iter().map(String::as_str).collect();
        format!(
            "cannot infer the variables from {{{}}}; give them with `vars:` or --vars",
            list.join(", ")
        )
    };
    if ids.is_empty() {
        return Ok(VarNames::default_for(1));
    }
    if ids.iter().all(|s| s == "t") {
        return Ok(VarNames::default_for(1));
    }
    const XYZ: [&str; 3] = ["x", "y", "z"];
    if ids.iter().all(|s| XYZ.contains(&s.as_str())) {
        let n = ids
            .iter()
            .map(|s| XYZ.iter().position(|x| x == s).unwrap_or(0) + 1)
            .max()
            .unwrap_or(1);
        let names = XYZ[..n].iter().map(|s| s.to_string()).collect();
        return VarNames::new(names).map_err(|e| plain(&e));
    }
    let mut n = 0;
    for s in &ids {
        match s.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
            Some(k) if k >= 1 && !s[1..].starts_with('0') => n = n.max(k),
            _ => return Err(fail()),
        }
    }
    Ok(VarNames::indexed("x", n))
}

/// Splits a `;` separated list, dropping empty entries.
pub fn split_list(text: &str) -> Vec<&str> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// Parses `"(2,0); (3,0); 1,1"` into exponent vectors of a common length.
pub fn parse_exponents(text: &str) -> Result<Vec<Exponent>, String> {
    let mut out: Vec<Exponent> = Vec::new();
    for item in split_list(text) {
        let inner = item.trim_start_matches('(').trim_end_matches(')');
        let coords = inner
            .split(',')
            .map(|c| c.trim().parse::<u32>())
            .collect::<Result<Vec<u32>, _>>()
            .map_err(|_| format!("--generators: `{item}` is not a vector of natural numbers"))?;
        if let Some(first) = out.first() {
            if first.dim() != coords.len() {
                return Err(format!(
                    "--generators: `{item}` has {} coordinates, expected {}",
                    coords.len(),
                    first.dim()
                ));
            }
        }
        out.push(Exponent::new(coords));
    }
    if out.is_empty() {
        return Err("--generators: empty list".to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_file_with_comments_and_inline_gens() {
        let src = "# demo\nvars: x, y\ngens: x + y; x*y\n  x*y^2  # trailing\nweight: 1,2\ncap: 9\n";
        let f = AlgebraFile::parse(src, "f").unwrap();
        let gens: Vec<&str> = f.gens.iter().map(|(s, _)| s.as_str()).collect();
        assert_eq!(gens, ["x + y", "x*y", "x*y^2"]);
        assert_eq!(f.weight.as_deref(), Some("1,2"));
        assert_eq!(f.cap.as_deref(), Some("9"));
    }

    #[test]
    fn parse_errors_point_at_the_generator() {
        let f = AlgebraFile::parse("gens:\n  x + y\n  x*+y\n", "f").unwrap();
        let names = f.names("f").unwrap();
        let err = f.polynomials(&names, "f").unwrap_err();
        assert!(err.starts_with("f:3:"), "{err}");
        assert!(AlgebraFile::parse("gens: x\nbogus: 1\n", "f").unwrap_err().starts_with("f:2:1"));
    }

    #[test]
    fn json_file() {
        let src = r#"{"vars": ["x", "y"], "gens": ["x^2", "y^3"], "weight": [1, 2], "cap": 12}"#;
        let f = AlgebraFile::parse(src, "f").unwrap();
        assert_eq!(f.weight.as_deref(), Some("1,2"));
        assert_eq!(f.cap.as_deref(), Some("12"));
        assert!(AlgebraFile::parse(r#"{"gens": ["x"], "extra": 1}"#, "f").is_err());
    }

    #[test]
    fn names_are_inferred() {
        let names = |v: &[&str]| infer_names(v.iter().copied()).map(|n| n.names().to_vec());
        assert_eq!(names(&["t^4", "t^6"]).unwrap(), ["t"]);
        assert_eq!(names(&["x + y"]).unwrap(), ["x", "y"]);
        assert_eq!(names(&["x", "z"]).unwrap(), ["x", "y", "z"]);
        assert_eq!(names(&["x1*x4"]).unwrap(), ["x1", "x2", "x3", "x4"]);
        assert!(names(&["a + b"]).is_err());
    }

    #[test]
    fn exponent_lists() {
        let e = parse_exponents("(2,0); (0,3); 1,1").unwrap();
        assert_eq!(e.len(), 3);
        assert!(parse_exponents("(2,0); (1)").is_err());
        assert!(parse_exponents("(-1)").is_err());
    }
}
