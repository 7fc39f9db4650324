//! Text and JSON forms of elements, series and generator tables.
//!
//! Element text: `coeff*e[(i,h),(j,k)]*...` terms joined by ` + ` / ` - `,
//! coefficients written `num/den`.  Element JSON: an array of
//! `{coeff, monomial: [[[i,h],[j,k]], ...]}`; cosets in `M` are wrapped as
//! `{reduced: true, terms: [...]}`.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::pyramid::{BoxIndex, HalfInt, Partition};
use crate::quotient::MElement;
use crate::rational::Q;
use crate::series::{BiSeries, Series, SeriesMatrix};
use crate::uea::{Gl, Letter, UeaElement};
use crate::walgebra::families::{Family, GenKey, WGenerators};
use crate::walgebra::WError;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot parse element at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("box ({0},{1}) is not in the pyramid")]
    NoSuchBox(usize, usize),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    W(#[from] WError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> FormatError {
        FormatError::Json(e.to_string())
    }
}

pub fn letter_text(gl: &Gl, l: Letter) -> String {
    let g = gl.info(l).gen;
    format!("e[({},{}),({},{})]", g.a.i, g.a.h, g.b.i, g.b.h)
}

pub fn element_text(gl: &Gl, x: &UeaElement) -> String {
    let mut out = String::new();
    for (m, c) in x.sorted_terms() {
        let body = std::iter::once(c.abs().to_string()).chain(m.iter().map(|&l| letter_text(gl, l)));
        let body = body.collect::<Vec<_>>().join("*");
        match (out.is_empty(), c.is_negative()) {
            (true, false) => out.push_str(&body),
            (true, true) => out.push_str(&format!("-{body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
            (false, true) => out.push_str(&format!(" - {body}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn melement_text(gl: &Gl, x: &MElement) -> String {
    element_text(gl, x.as_uea())
}

fn monomial_json(gl: &Gl, m: &[Letter]) -> Value {
    Value::Array(
        m.iter()
            .map(|&l| {
                let g = gl.info(l).gen;
                json!([[g.a.i, g.a.h], [g.b.i, g.b.h]])
            })
            .collect(),
    )
}

pub fn element_json(gl: &Gl, x: &UeaElement) -> Value {
    Value::Array(
        x.sorted_terms()
            .into_iter()
            .map(|(m, c)| json!({"coeff": c.to_string(), "monomial": monomial_json(gl, m)}))
            .collect(),
    )
}

pub fn melement_json(gl: &Gl, x: &MElement) -> Value {
    json!({"reduced": true, "terms": element_json(gl, x.as_uea())})
}

struct Cursor<'s> {
    s: &'s [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, FormatError> {
        Err(FormatError::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), FormatError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected `{}`", c as char))
        }
    }

    fn digits(&mut self) -> Result<&str, FormatError> {
        self.skip_ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits"))
    }

    fn usize(&mut self) -> Result<usize, FormatError> {
        let d = self.digits()?;
        d.parse().map_err(|_| FormatError::Parse { pos: self.pos, msg: "index out of range".into() })
    }

    fn coeff(&mut self) -> Result<Q, FormatError> {
        let n = self.digits()?.to_string();
        let text = if self.eat(b'/') { format!("{n}/{}", self.digits()?) } else { n };
        match text.parse::<Q>() {
            Ok(q) => Ok(q),
            Err(_) => self.err("bad coefficient"),
        }
    }

    fn box_index(&mut self) -> Result<BoxIndex, FormatError> {
        self.expect(b'(')?;
        let i = self.usize()?;
        self.expect(b',')?;
        let h = self.usize()?;
        self.expect(b')')?;
        Ok(BoxIndex::new(i, h))
    }

    fn letter(&mut self, gl: &Gl) -> Result<Letter, FormatError> {
        self.expect(b'e')?;
        self.expect(b'[')?;
        let a = self.box_index()?;
        self.expect(b',')?;
        let b = self.box_index()?;
        self.expect(b']')?;
        for x in [a, b] {
            if !gl.partition().contains(x) {
                return Err(FormatError::NoSuchBox(x.i, x.h));
            }
        }
        Ok(gl.letter(a, b))
    }
}

/// Parses the element text form; words are brought to PBW normal form.
pub fn parse_element(gl: &Gl, s: &str) -> Result<UeaElement, FormatError> {
    let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
    let mut words: Vec<(Vec<Letter>, Q)> = Vec::new();
    let mut first = true;
    loop {
        let negative = match cur.peek() {
            None if !first => break,
            None => return cur.err("empty element"),
            Some(b'+') if !first => {
                cur.pos += 1;
                false
            }
            Some(b'-') => {
                cur.pos += 1;
                true
            }
            Some(_) if first => false,
            Some(_) => return cur.err("expected `+` or `-`"),
        };
        first = false;
        let has_coeff = cur.peek().is_some_and(|c| c.is_ascii_digit());
        let mut c = if has_coeff { cur.coeff()? } else { Q::ONE };
        let mut word = Vec::new();
        if !has_coeff || cur.eat(b'*') {
            loop {
                word.push(cur.letter(gl)?);
                if !cur.eat(b'*') {
                    break;
                }
            }
        }
        if negative {
            c = -c;
        }
        words.push((word, c));
    }
    Ok(gl.normal_form_sum(&words))
}

fn json_str<'v>(v: &'v Value, what: &str) -> Result<&'v str, FormatError> {
    v.as_str().ok_or_else(|| FormatError::Json(format!("{what} must be a string")))
}

fn json_usize(v: &Value, what: &str) -> Result<usize, FormatError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| FormatError::Json(format!("{what} must be a nonnegative integer")))
}

/// Parses element JSON (an array of terms, `{reduced, terms}`, or a string
/// in the text form).
pub fn parse_element_json(gl: &Gl, v: &Value) -> Result<UeaElement, FormatError> {
    if let Some(s) = v.as_str() {
        return parse_element(gl, s);
    }
    let terms = match v.get("terms") {
        Some(t) => t,
        None => v,
    };
    let terms = terms.as_array().ok_or_else(|| FormatError::Json("element must be an array of terms".into()))?;
    let mut words = Vec::with_capacity(terms.len());
    for t in terms {
        let c: Q = json_str(&t["coeff"], "coeff")?
            .parse()
            .map_err(|_| FormatError::Json(format!("bad coefficient {}", t["coeff"])))?;
        let mono = t["monomial"].as_array().ok_or_else(|| FormatError::Json("monomial must be an array".into()))?;
        let mut word = Vec::with_capacity(mono.len());
        for pair in mono {
            let mut boxes = Vec::with_capacity(2);
            for k in 0..2 {
                let b = &pair[k];
                let (i, h) = (json_usize(&b[0], "box row")?, json_usize(&b[1], "box column")?);
                let x = BoxIndex::new(i, h);
                if !gl.partition().contains(x) {
                    return Err(FormatError::NoSuchBox(i, h));
                }
                boxes.push(x);
            }
            word.push(gl.letter(boxes[0], boxes[1]));
        }
        words.push((word, c));
    }
    Ok(gl.normal_form_sum(&words))
}

pub fn halfint_json(h: HalfInt) -> Value {
    Value::String(h.to_string())
}

/// `{floor, terms: [{zpow, element}]}` from the highest power down; an
/// exact series has `floor: null`.
pub fn series_json<E: Clone + PartialEq + std::fmt::Debug>(s: &Series<E>, elem: impl Fn(&E) -> Value) -> Value {
    let terms: Vec<Value> =
        s.terms().rev().map(|(n, c)| json!({"zpow": halfint_json(n), "element": elem(c)})).collect();
    json!({"floor": s.floor().map(halfint_json), "terms": terms})
}

/// Entries of a matrix of series, row by row.
pub fn matrix_json<E: Clone + PartialEq + std::fmt::Debug>(m: &SeriesMatrix<E>, elem: impl Fn(&E) -> Value) -> Value {
    let rows: Vec<Value> =
        (0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| series_json(m.get(i, j), &elem)).collect())).collect();
    json!({"rows": m.rows(), "cols": m.cols(), "entries": rows})
}

pub fn bi_series_json<E>(s: &BiSeries<E>, elem: impl Fn(&E) -> Value) -> Value {
    let terms: Vec<Value> = s
        .terms
        .iter()
        .rev()
        .map(|(&(x, y), c)| {
            json!({"zpow": halfint_json(HalfInt::from_doubled(x)), "wpow": halfint_json(HalfInt::from_doubled(y)), "element": elem(c)})
        })
        .collect();
    json!({"floor_z": halfint_json(s.floor_z), "floor_w": halfint_json(s.floor_w), "terms": terms})
}

fn power_text(var: &str, n: HalfInt) -> String {
    match n.doubled {
        0 => "1".to_string(),
        2 => var.to_string(),
        _ => format!("{var}^{n}"),
    }
}

/// One line per nonzero coefficient, highest power first, then the floor.
pub fn series_text<E: Clone + PartialEq + std::fmt::Debug>(
    s: &Series<E>,
    var: &str,
    indent: &str,
    elem: impl Fn(&E) -> String,
) -> String {
    let mut out = String::new();
    for (n, c) in s.terms().rev() {
        out.push_str(&format!("{indent}[{}] {}\n", power_text(var, n), elem(c)));
    }
    if s.is_zero() {
        out.push_str(&format!("{indent}0\n"));
    }
    match s.floor() {
        Some(f) => out.push_str(&format!("{indent}(exact down to {})\n", power_text(var, f))),
        None => out.push_str(&format!("{indent}(exact)\n")),
    }
    out
}

pub fn generators_json(gl: &Gl, g: &WGenerators) -> Value {
    let gens: Vec<Value> =
        g.iter().map(|(&(i, j, k), w)| json!({"i": i, "j": j, "k": k, "element": melement_json(gl, w)})).collect();
    json!({"partition": g.partition().to_string(), "family": g.family().name(), "generators": gens})
}

pub fn generators_text(gl: &Gl, g: &WGenerators) -> String {
    g.iter().map(|(&(i, j, k), w)| format!("w[{i},{j};{k}] = {}\n", melement_text(gl, w))).collect()
}

/// A generator table read from JSON `{partition, generators: [{i, j, k, element}]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateFile {
    pub partition: Partition,
    entries: Vec<(GenKey, Value)>,
}

impl CandidateFile {
    pub fn parse(text: &str) -> Result<CandidateFile, FormatError> {
        let v: Value = serde_json::from_str(text)?;
        let p = json_str(&v["partition"], "partition")?;
        let partition: Partition =
            p.parse().map_err(|e: crate::pyramid::PyramidError| FormatError::Json(e.to_string()))?;
        let gens = v["generators"].as_array().ok_or_else(|| FormatError::Json("generators must be an array".into()))?;
        let mut entries = Vec::with_capacity(gens.len());
        for g in gens {
            let key = (json_usize(&g["i"], "i")?, json_usize(&g["j"], "j")?, json_usize(&g["k"], "k")?);
            entries.push((key, g["element"].clone()));
        }
        Ok(CandidateFile { partition, entries })
    }

    /// The table with every element reduced modulo `I`.
    pub fn generators(&self, gl: &Gl) -> Result<WGenerators, FormatError> {
        let mut table = BTreeMap::new();
        for (key, v) in &self.entries {
            let x = parse_element_json(gl, v)?;
            if table.insert(*key, gl.reduce_mod_i(&x)).is_some() {
                return Err(FormatError::Json(format!("w[{},{};{}] is given twice", key.0, key.1, key.2)));
            }
        }
        Ok(WGenerators::new(self.partition.clone(), Family::Candidates, table)?)
    }
}
