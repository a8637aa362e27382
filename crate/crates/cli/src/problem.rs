use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use spinhodge_core::model::Shape;

/// What a problem file asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Integral,
    Relations,
    Genus0Check,
    Calibrate,
}

impl Mode {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "integral" => Some(Mode::Integral),
            "relations" => Some(Mode::Relations),
            "genus0-check" => Some(Mode::Genus0Check),
            "calibrate" => Some(Mode::Calibrate),
            _ => None,
        }
    }
}

/// Sectors requested by a problem file: one explicit monodromy list or a
/// sweep over every valid sector with a given number of markings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monodromies {
    Explicit(Vec<u64>),
    AllNarrow { markings: usize },
    All { markings: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProblemSpec {
    pub shape: String,
    pub exponents: Vec<u32>,
    pub group_order: Option<u64>,
    pub genus: u32,
    pub monodromies: Monodromies,
    pub psi_powers: Option<Vec<u32>>,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> ProblemError {
    ProblemError { line, message: message.into() }
}

fn parse_list<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<Vec<T>, ProblemError> {
    value
        .split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<T>().map_err(|_| err(line, format!("{key}: {x:?} is not a non-negative integer"))))
        .collect()
}

impl ProblemSpec {
    /// Line-oriented `key = value`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| err(line, format!("expected `key = value`, got {content:?}")))?;
            let key = key.trim().to_string();
            const KEYS: [&str; 8] = ["shape", "exponents", "group_order", "genus", "monodromies", "markings", "psi_powers", "mode"];
            if !KEYS.contains(&key.as_str()) {
                return Err(err(line, format!("unknown key {key:?}")));
            }
            if entries.insert(key.clone(), (line, value.trim().to_string())).is_some() {
                return Err(err(line, format!("duplicate key {key:?}")));
            }
        }
        let take = |k: &str| entries.get(k).cloned();
        let required = |k: &str| take(k).ok_or_else(|| err(0, format!("missing key {k:?}")));

        let (l, shape) = required("shape")?;
        if !["fermat", "chain", "loop"].contains(&shape.as_str()) {
            return Err(err(l, format!("shape must be fermat, chain or loop, got {shape:?}")));
        }
        let (l, ex) = required("exponents")?;
        let exponents: Vec<u32> = parse_list(&ex, l, "exponents")?;
        if exponents.is_empty() {
            return Err(err(l, "exponents: empty list"));
        }
        let group_order = match take("group_order") {
            None => None,
            Some((l, v)) => Some(v.parse::<u64>().map_err(|_| err(l, format!("group_order: {v:?} is not a positive integer")))?),
        };
        let (l, g) = required("genus")?;
        let genus = g.parse::<u32>().map_err(|_| err(l, format!("genus: {g:?} is not a non-negative integer")))?;
        let (l, m) = required("monodromies")?;
        let markings = match take("markings") {
            None => None,
            Some((l, v)) => Some(v.parse::<usize>().map_err(|_| err(l, format!("markings: {v:?} is not an integer")))?),
        };
        let monodromies = match m.as_str() {
            "narrow" | "all" => {
                let n = markings.ok_or_else(|| err(l, "a sweep over sectors needs `markings = n`"))?;
                if m == "narrow" {
                    Monodromies::AllNarrow { markings: n }
                } else {
                    Monodromies::All { markings: n }
                }
            }
            _ => {
                let list: Vec<u64> = parse_list(&m, l, "monodromies")?;
                if list.is_empty() {
                    return Err(err(l, "monodromies: empty list"));
                }
                Monodromies::Explicit(list)
            }
        };
        let psi_powers = match take("psi_powers") {
            None => None,
            Some((l, v)) => Some(parse_list(&v, l, "psi_powers")?),
        };
        let mode = match take("mode") {
            None => Mode::Integral,
            Some((l, v)) => Mode::parse(&v).ok_or_else(|| err(l, format!("mode must be integral, relations, genus0-check or calibrate, got {v:?}")))?,
        };
        if let (Some(b), Monodromies::Explicit(k)) = (&psi_powers, &monodromies) {
            if b.len() != k.len() {
                return Err(err(0, format!("{} psi_powers for {} monodromies", b.len(), k.len())));
            }
        }
        Ok(ProblemSpec { shape, exponents, group_order, genus, monodromies, psi_powers, mode })
    }

    pub fn shape(&self) -> Result<Shape, ProblemError> {
        match self.shape.as_str() {
            "fermat" => {
                if self.exponents.len() != 1 {
                    return Err(err(0, "a Fermat monomial takes exactly one exponent"));
                }
                Ok(Shape::Fermat(self.exponents[0]))
            }
            "chain" => Ok(Shape::Chain(self.exponents.clone())),
            _ => Ok(Shape::Loop(self.exponents.clone())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_file() {
        let spec = ProblemSpec::parse(
            "# cubic\nshape = fermat\nexponents = 3\ngenus = 0\nmonodromies = 2, 2, 2, 2  # four markings\npsi_powers = 0,0,0,0\nmode = integral\n",
        )
        .unwrap();
        assert_eq!(spec.exponents, vec![3]);
        assert_eq!(spec.monodromies, Monodromies::Explicit(vec![2, 2, 2, 2]));
        assert_eq!(spec.mode, Mode::Integral);
    }

    #[test]
    fn reports_the_offending_line() {
        let e = ProblemSpec::parse("shape = fermat\nexponents = 3, x\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = ProblemSpec::parse("shape = fermat\nbogus = 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(ProblemSpec::parse("shape = fermat\nexponents = 3\ngenus = 1\n").is_err());
    }
}
