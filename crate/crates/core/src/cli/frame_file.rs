//! Frame and algebra documents read by `hypoheat popp`.
//!
//! One entry per line, `#` starts a comment:
//!
//! ```text
//! dim = 3
//! coords = x, y, z            # optional, default x1 … xn (x, y, z for n = 3)
//! point = 0, 2, 0             # optional, --point wins
//! frame = 1, 0, y^2/2         # one line per field, components as formulas
//! frame = 0, 1, 0
//! bracket 1 2 -> 0, 0, -y     # right-nested word, indices from 1
//! bracket 2 1 2 -> 0, 0, -1
//! ```
//!
//! Without `frame` lines the document describes a Lie algebra instead:
//! `horizontal = 1, 2` and `bracket i j -> c_1, …, c_n` give
//! `[e_i, e_j] = Σ c_k e_k`, constants only.
//!
//! Formulas use `+ - * / ^`, parentheses and `sin cos tan exp ln sqrt
//! sinh cosh tanh abs`; every number is a float.

use std::collections::BTreeMap;

use evalexpr::{
    build_operator_tree, ContextWithMutableFunctions, ContextWithMutableVariables, DefaultNumericTypes,
    Function, HashMapContext, Node, Value,
};

use crate::error::{Error, Result};
use crate::lie_core::{BracketWord, FrameField, LieAlgebraSpec};

type Expr = Node<DefaultNumericTypes>;

/// A parsed document: either a frame of vector fields or an algebra.
#[derive(Debug)]
pub enum FrameDocument {
    Frame(ExprFrame),
    Algebra(LieAlgebraSpec),
}

/// Parsed document plus the point it names, if any.
#[derive(Debug)]
pub struct ParsedFrameFile {
    pub document: FrameDocument,
    pub point: Option<Vec<f64>>,
}

/// Frame given by formulas in the chart coordinates.
#[derive(Debug)]
pub struct ExprFrame {
    coords: Vec<String>,
    fields: Vec<Vec<Expr>>,
    brackets: Vec<(BracketWord, Vec<Expr>)>,
}

impl ExprFrame {
    pub fn coord_names(&self) -> &[String] {
        &self.coords
    }

    fn context(&self, q: &[f64]) -> HashMapContext<DefaultNumericTypes> {
        let mut ctx = HashMapContext::new();
        for (name, v) in self.coords.iter().zip(q) {
            // names were checked at parse time
            let _ = ctx.set_value(name.clone(), Value::Float(*v));
        }
        let _ = ctx.set_value("pi".into(), Value::Float(std::f64::consts::PI));
        for (name, f) in MATH {
            let f = *f;
            let _ = ctx.set_function(
                (*name).into(),
                Function::new(move |arg: &Value<DefaultNumericTypes>| Ok(Value::Float(f(arg.as_number()?)))),
            );
        }
        ctx
    }

    fn eval_all(&self, exprs: &[Expr], ctx: &HashMapContext<DefaultNumericTypes>) -> Vec<f64> {
        // non-numeric results become NaN and are rejected downstream
        exprs
            .iter()
            .map(|e| e.eval_number_with_context(ctx).unwrap_or(f64::NAN))
            .collect()
    }
}

type MathFn = fn(f64) -> f64;

const MATH: &[(&str, MathFn)] = &[
    ("sin", f64::sin),
    ("cos", f64::cos),
    ("tan", f64::tan),
    ("exp", f64::exp),
    ("ln", f64::ln),
    ("sqrt", f64::sqrt),
    ("sinh", f64::sinh),
    ("cosh", f64::cosh),
    ("tanh", f64::tanh),
    ("abs", f64::abs),
];

impl FrameField for ExprFrame {
    fn coords_dim(&self) -> usize {
        self.coords.len()
    }

    fn frame_len(&self) -> usize {
        self.fields.len()
    }

    fn frame(&self, q: &[f64]) -> Vec<Vec<f64>> {
        let ctx = self.context(q);
        self.fields.iter().map(|f| self.eval_all(f, &ctx)).collect()
    }

    fn brackets(&self, q: &[f64]) -> BTreeMap<BracketWord, Vec<f64>> {
        let ctx = self.context(q);
        self.brackets
            .iter()
            .map(|(w, e)| (w.clone(), self.eval_all(e, &ctx)))
            .collect()
    }
}

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("frame file line {line}: {msg}"))
}

/// Integer literals become float literals so that `1/2` means one half.
fn floatify(src: &str) -> String {
    let chars: Vec<char> = src.chars().collect();
    let mut out = String::with_capacity(src.len() + 8);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_alphabetic() || c == '_' {
            // identifiers may contain digits
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == ':')
            {
                out.push(chars[i]);
                i += 1;
            }
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            let mut float = false;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                float |= chars[i] == '.';
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                float = true;
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let lit: String = chars[start..i].iter().collect();
            out.push_str(&lit);
            if !float {
                out.push_str(".0");
            }
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

fn parse_expr(src: &str, line: usize) -> Result<Expr> {
    build_operator_tree::<DefaultNumericTypes>(&floatify(src.trim()))
        .map_err(|e| err(line, format!("bad formula `{}`: {e}", src.trim())))
}

fn parse_list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn parse_numbers(v: &str, line: usize) -> Result<Vec<f64>> {
    parse_list(v)
        .into_iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| err(line, format!("`{s}` is not a number")))
        })
        .collect()
}

fn parse_indices(v: &str, line: usize) -> Result<Vec<usize>> {
    v.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(err(line, format!("`{s}` is not an index ≥ 1"))),
        })
        .collect()
}

/// Parses a frame or algebra document.
pub fn parse_frame_file(text: &str) -> Result<ParsedFrameFile> {
    let mut dim: Option<usize> = None;
    let mut name = String::from("algebra");
    let mut coords: Option<Vec<String>> = None;
    let mut point = None;
    let mut horizontal = None;
    let mut frame_src: Vec<(usize, String)> = Vec::new();
    let mut bracket_src: Vec<(usize, Vec<usize>, String)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("bracket") {
            let (word, value) = rest
                .split_once("->")
                .ok_or_else(|| err(line, "bracket lines read `bracket i j … -> v1, v2, …`"))?;
            let word = parse_indices(word, line)?;
            if word.len() < 2 {
                return Err(err(line, "a bracket needs at least two indices"));
            }
            bracket_src.push((line, word, value.to_string()));
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(line, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "dim" => {
                dim = Some(
                    value
                        .parse()
                        .map_err(|_| err(line, "dim must be a positive integer"))?,
                )
            }
            "name" => name = value.to_string(),
            "coords" => {
                let names: Vec<String> = parse_list(value).into_iter().map(String::from).collect();
                for n in &names {
                    let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                        && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok || MATH.iter().any(|(f, _)| f == n) || n == "pi" {
                        return Err(err(line, format!("`{n}` cannot name a coordinate")));
                    }
                }
                coords = Some(names);
            }
            "point" => point = Some(parse_numbers(value, line)?),
            "horizontal" => horizontal = Some(parse_indices(value, line)?),
            "frame" => frame_src.push((line, value.to_string())),
            other => return Err(err(line, format!("unknown key `{other}`"))),
        }
    }

    let n = dim.ok_or_else(|| Error::Input("frame file does not set `dim`".into()))?;
    if n == 0 {
        return Err(Error::Input("dim must be positive".into()));
    }
    if let Some(p) = &point {
        if p.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: p.len(),
            });
        }
    }

    if frame_src.is_empty() {
        let horizontal =
            horizontal.ok_or_else(|| Error::Input("algebra documents need `horizontal`".into()))?;
        let mut c = vec![vec![vec![0.0; n]; n]; n];
        for (line, word, value) in &bracket_src {
            if word.len() != 2 || word.iter().any(|&i| i >= n) {
                return Err(err(*line, "algebra brackets take two basis indices"));
            }
            let v = parse_numbers(value, *line)?;
            if v.len() != n {
                return Err(err(*line, format!("expected {n} coefficients, got {}", v.len())));
            }
            let (i, j) = (word[0], word[1]);
            for k in 0..n {
                c[i][j][k] = v[k];
                c[j][i][k] = -v[k];
            }
        }
        let spec = LieAlgebraSpec::new(name, n, c, horizontal)?;
        return Ok(ParsedFrameFile {
            document: FrameDocument::Algebra(spec),
            point,
        });
    }

    let coords = coords.unwrap_or_else(|| {
        if n == 3 {
            vec!["x".into(), "y".into(), "z".into()]
        } else {
            (1..=n).map(|i| format!("x{i}")).collect()
        }
    });
    if coords.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: coords.len(),
        });
    }
    let m = frame_src.len();
    let mut fields = Vec::with_capacity(m);
    for (line, value) in &frame_src {
        let parts = parse_list(value);
        if parts.len() != n {
            return Err(err(
                *line,
                format!("expected {n} components, got {}", parts.len()),
            ));
        }
        fields.push(
            parts
                .into_iter()
                .map(|s| parse_expr(s, *line))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let mut brackets = Vec::with_capacity(bracket_src.len());
    for (line, word, value) in &bracket_src {
        if word.iter().any(|&i| i >= m) {
            return Err(err(*line, format!("bracket index beyond the {m} frame fields")));
        }
        let parts = parse_list(value);
        if parts.len() != n {
            return Err(err(
                *line,
                format!("expected {n} components, got {}", parts.len()),
            ));
        }
        let exprs = parts
            .into_iter()
            .map(|s| parse_expr(s, *line))
            .collect::<Result<Vec<_>>>()?;
        brackets.push((BracketWord::new(word.clone())?, exprs));
    }
    Ok(ParsedFrameFile {
        document: FrameDocument::Frame(ExprFrame {
            coords,
            fields,
            brackets,
        }),
        point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_literals_are_floats() {
        assert_eq!(floatify("y^2/2"), "y^2.0/2.0");
        assert_eq!(floatify("1e-3*x1 + 0.5"), "1e-3*x1 + 0.5");
        assert_eq!(floatify("sin(2*x)"), "sin(2.0*x)");
    }

    #[test]
    fn martinet_frame_evaluates() {
        let doc = "dim = 3\nframe = 1, 0, y^2/2\nframe = 0, 1, 0\nbracket 1 2 -> 0, 0, -y # [L1, L2]\n";
        let parsed = parse_frame_file(doc).unwrap();
        let FrameDocument::Frame(f) = parsed.document else {
            panic!("expected a frame")
        };
        assert_eq!(f.frame(&[0.0, 2.0, 0.0])[0], vec![1.0, 0.0, 2.0]);
        let b = f.brackets(&[0.0, 3.0, 0.0]);
        assert_eq!(b[&BracketWord(vec![0, 1])], vec![0.0, 0.0, -3.0]);
    }

    #[test]
    fn algebra_document() {
        let doc = "name = h\ndim = 3\nhorizontal = 1, 2\nbracket 1 2 -> 0, 0, 1\n";
        let FrameDocument::Algebra(spec) = parse_frame_file(doc).unwrap().document else {
            panic!()
        };
        assert!(spec.is_unimodular());
        assert_eq!(spec.c(1, 0, 2), -1.0);
    }

    #[test]
    fn reports_bad_lines() {
        assert!(parse_frame_file("dim = 3\nframe = 1, 0\n")
            .unwrap_err()
            .is_input());
        assert!(parse_frame_file("dim = 2\ncoords = sin, y\nframe = 1, 0\n").is_err());
        assert!(parse_frame_file("frame = 1\n").is_err());
        assert!(parse_frame_file("dim = 1\nbogus = 3\n").is_err());
    }
}
