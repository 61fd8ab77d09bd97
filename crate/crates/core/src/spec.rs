//! Path specification files.
//!
//! Specs are TOML. All angles are in radians; numeric fields accept plain
//! numbers or short expressions in `pi` such as `"pi/6"`, `"-3*pi/4"` or
//! `"2 pi"`.
//!
//! ```toml
//! samples = 2048          # optional, abelian quadrature
//! segments = 4096         # optional, holonomy steps
//!
//! [path]
//! kind = "circle"         # one coordinate runs through full turns
//! angle = "alpha"
//! winding = 1
//! center = { beta = "pi/6", theta = "pi/2" }   # omitted angles are 0
//!
//! [hamiltonian]           # optional defaults for holonomy/evolve
//! e1 = 0
//! e3 = 5
//! levels = "1,2"
//! t_ladder = [50, 100, 200, 400]
//! ```
//!
//! An explicit polyline uses `kind = "keyframes"` with `closed = true|false`
//! and a `[[path.keyframe]]` table per vertex (`t` optional, evenly spaced
//! when omitted everywhere).
//!
//! Every rejection carries `line:column` and the offending field.

use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::nonabelian::LevelSet;
use crate::path::{Coord, Keyframe, ParameterPath, Point};

#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Float(f64),
    Expr(String),
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    alpha: Option<Spanned<Num>>,
    beta: Option<Spanned<Num>>,
    gamma: Option<Spanned<Num>>,
    theta: Option<Spanned<Num>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawKeyframe {
    t: Option<Spanned<Num>>,
    alpha: Option<Spanned<Num>>,
    beta: Option<Spanned<Num>>,
    gamma: Option<Spanned<Num>>,
    theta: Option<Spanned<Num>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawPath {
    kind: Spanned<String>,
    angle: Option<Spanned<String>>,
    winding: Option<Spanned<i64>>,
    center: Option<RawPoint>,
    closed: Option<Spanned<bool>>,
    keyframe: Option<Vec<Spanned<RawKeyframe>>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawHamiltonian {
    e1: Option<Spanned<Num>>,
    e3: Option<Spanned<Num>>,
    levels: Option<Spanned<String>>,
    t_ladder: Option<Spanned<Vec<Num>>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    samples: Option<Spanned<i64>>,
    segments: Option<Spanned<i64>>,
    path: Spanned<RawPath>,
    hamiltonian: Option<RawHamiltonian>,
}

/// Defaults for the Hamiltonian-based commands; flags override them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HamiltonianSpec {
    pub e1: Option<f64>,
    pub e3: Option<f64>,
    pub levels: Option<LevelSet>,
    pub t_ladder: Option<Vec<f64>>,
}

/// A validated spec file.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    pub path: ParameterPath,
    /// `"circle"` or `"keyframes"`.
    pub kind: String,
    pub samples: Option<usize>,
    pub segments: Option<usize>,
    pub hamiltonian: HamiltonianSpec,
}

struct Ctx<'a> {
    source: &'a str,
    text: &'a str,
}

impl Ctx<'_> {
    fn location(&self, span: Option<Range<usize>>, field: &str) -> String {
        match span {
            Some(r) => {
                let before = &self.text[..r.start.min(self.text.len())];
                let line = before.matches('\n').count() + 1;
                let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                format!("{}:{line}:{col} ({field})", self.source)
            }
            None => format!("{} ({field})", self.source),
        }
    }

    fn err(&self, span: Option<Range<usize>>, field: &str, message: impl Into<String>) -> Error {
        Error::SpecParse { location: self.location(span, field), message: message.into() }
    }

    fn num(&self, v: &Spanned<Num>, field: &str) -> Result<f64> {
        let x = match v.get_ref() {
            Num::Int(i) => *i as f64,
            Num::Float(f) => *f,
            Num::Expr(s) => eval_expr(s).map_err(|m| self.err(Some(v.span()), field, m))?,
        };
        if !x.is_finite() {
            return Err(self.err(Some(v.span()), field, "value is not finite"));
        }
        Ok(x)
    }

    fn opt_num(&self, v: &Option<Spanned<Num>>, field: &str) -> Result<Option<f64>> {
        v.as_ref().map(|v| self.num(v, field)).transpose()
    }

    fn count(&self, v: &Option<Spanned<i64>>, field: &str) -> Result<Option<usize>> {
        match v {
            None => Ok(None),
            Some(s) if *s.get_ref() > 0 => Ok(Some(*s.get_ref() as usize)),
            Some(s) => Err(self.err(Some(s.span()), field, "must be a positive integer")),
        }
    }

    fn point(&self, p: &RawPoint, prefix: &str) -> Result<Point> {
        Ok([
            self.opt_num(&p.alpha, &format!("{prefix}.alpha"))?.unwrap_or(0.0),
            self.opt_num(&p.beta, &format!("{prefix}.beta"))?.unwrap_or(0.0),
            self.opt_num(&p.gamma, &format!("{prefix}.gamma"))?.unwrap_or(0.0),
            self.opt_num(&p.theta, &format!("{prefix}.theta"))?.unwrap_or(0.0),
        ])
    }
}

impl PathSpec {
    /// Parses and validates spec text. `source` names the file in diagnostics.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let ctx = Ctx { source, text };
        let raw: RawSpec = toml::from_str(text).map_err(|e| ctx.err(e.span(), "syntax", e.message().trim()))?;
        let samples = ctx.count(&raw.samples, "samples")?;
        let segments = ctx.count(&raw.segments, "segments")?;
        let rp = raw.path.get_ref();
        let kind = rp.kind.get_ref().as_str();
        let path = match kind {
            "circle" => {
                for (present, field) in [(rp.closed.is_some(), "path.closed"), (rp.keyframe.is_some(), "path.keyframe")] {
                    if present {
                        return Err(ctx.err(Some(raw.path.span()), field, "not allowed for kind = \"circle\""));
                    }
                }
                let angle = rp.angle.as_ref().ok_or_else(|| ctx.err(Some(raw.path.span()), "path.angle", "missing"))?;
                let coord: Coord = angle
                    .get_ref()
                    .parse()
                    .map_err(|_| ctx.err(Some(angle.span()), "path.angle", format!("unknown angle `{}`; use alpha, beta, gamma or theta", angle.get_ref())))?;
                let winding = match &rp.winding {
                    None => 1,
                    Some(w) => {
                        let n = *w.get_ref();
                        if n == 0 || n.unsigned_abs() > 1_000 {
                            return Err(ctx.err(Some(w.span()), "path.winding", "must be a nonzero integer of magnitude at most 1000"));
                        }
                        n as i32
                    }
                };
                let center = match &rp.center {
                    Some(c) => ctx.point(c, "path.center")?,
                    None => [0.0; 4],
                };
                ParameterPath::coordinate_circle(coord, center, winding)
                    .map_err(|e| ctx.err(Some(raw.path.span()), "path", e.to_string()))?
            }
            "keyframes" => {
                for (present, field) in [(rp.angle.is_some(), "path.angle"), (rp.winding.is_some(), "path.winding"), (rp.center.is_some(), "path.center")] {
                    if present {
                        return Err(ctx.err(Some(raw.path.span()), field, "not allowed for kind = \"keyframes\""));
                    }
                }
                let frames = rp.keyframe.as_deref().unwrap_or(&[]);
                if frames.len() < 2 {
                    return Err(ctx.err(Some(raw.path.span()), "path.keyframe", "at least 2 [[path.keyframe]] entries required"));
                }
                let with_t = frames.iter().filter(|k| k.get_ref().t.is_some()).count();
                if with_t != 0 && with_t != frames.len() {
                    return Err(ctx.err(Some(raw.path.span()), "path.keyframe.t", "give t for every keyframe or for none"));
                }
                let closed = rp.closed.as_ref().is_some_and(|c| *c.get_ref());
                let mut keyframes = Vec::with_capacity(frames.len());
                for (i, k) in frames.iter().enumerate() {
                    let prefix = format!("path.keyframe[{i}]");
                    let kf = k.get_ref();
                    let p = RawPoint { alpha: kf.alpha.clone(), beta: kf.beta.clone(), gamma: kf.gamma.clone(), theta: kf.theta.clone() };
                    let point = ctx.point(&p, &prefix)?;
                    let t = match &kf.t {
                        Some(t) => ctx.num(t, &format!("{prefix}.t"))?,
                        None => i as f64 / (frames.len() - 1) as f64,
                    };
                    keyframes.push(Keyframe { t, point });
                }
                if with_t == 0 {
                    keyframes.last_mut().unwrap().t = 1.0;
                }
                ParameterPath::new(keyframes, closed).map_err(|e| {
                    let span = match e {
                        Error::PathNotClosed => rp.closed.as_ref().map(|c| c.span()),
                        _ => None,
                    };
                    ctx.err(span.or(Some(raw.path.span())), "path", e.to_string())
                })?
            }
            other => {
                return Err(ctx.err(Some(rp.kind.span()), "path.kind", format!("unknown kind `{other}`; use \"circle\" or \"keyframes\"")))
            }
        };

        let mut hamiltonian = HamiltonianSpec::default();
        if let Some(h) = &raw.hamiltonian {
            hamiltonian.e1 = ctx.opt_num(&h.e1, "hamiltonian.e1")?;
            hamiltonian.e3 = ctx.opt_num(&h.e3, "hamiltonian.e3")?;
            if let Some(l) = &h.levels {
                hamiltonian.levels =
                    Some(l.get_ref().parse().map_err(|e: Error| ctx.err(Some(l.span()), "hamiltonian.levels", e.to_string()))?);
            }
            if let Some(ladder) = &h.t_ladder {
                let mut ts = Vec::new();
                for v in ladder.get_ref() {
                    let t = match v {
                        Num::Int(i) => *i as f64,
                        Num::Float(f) => *f,
                        Num::Expr(s) => eval_expr(s).map_err(|m| ctx.err(Some(ladder.span()), "hamiltonian.t_ladder", m))?,
                    };
                    if !(t > 0.0 && t.is_finite()) {
                        return Err(ctx.err(Some(ladder.span()), "hamiltonian.t_ladder", "entries must be positive"));
                    }
                    ts.push(t);
                }
                hamiltonian.t_ladder = Some(ts);
            }
        }
        Ok(PathSpec { path, kind: kind.to_string(), samples, segments, hamiltonian })
    }

    /// Reads and parses a spec file.
    pub fn load(path: &std::path::Path) -> Result<(Self, String)> {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::SpecParse { location: name.clone(), message: format!("cannot read file: {e}") })?;
        let spec = Self::parse(&text, &name)?;
        Ok((spec, text))
    }
}

/// Evaluates `+ - * /`, parentheses, decimal literals and `pi`.
/// Juxtaposition multiplies: `"3pi/4"`, `"2 pi"`.
pub fn eval_expr(s: &str) -> std::result::Result<f64, String> {
    let tokens = tokenize(s)?;
    let mut p = ExprParser { tokens: &tokens, pos: 0 };
    let v = p.sum()?;
    if p.pos != tokens.len() {
        return Err(format!("unexpected trailing input in `{s}`"));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Op(char),
}

fn tokenize(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == 'e' || chars[i] == 'E'
                || ((chars[i] == '-' || chars[i] == '+') && matches!(chars[i - 1], 'e' | 'E')))
            {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(lit.parse().map_err(|_| format!("bad number `{lit}`"))?));
        } else if chars[i..].starts_with(&['p', 'i']) {
            out.push(Tok::Num(std::f64::consts::PI));
            i += 2;
        } else if c == 'π' {
            out.push(Tok::Num(std::f64::consts::PI));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}` in `{s}`"));
        }
    }
    if out.is_empty() {
        return Err("empty expression".into());
    }
    Ok(out)
}

struct ExprParser<'a> {
    tokens: &'a [Tok],
    pos: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn sum(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.product()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.product()?;
            v = if op == '+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn product(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op(op @ ('*' | '/'))) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    v = if op == '*' { v * rhs } else { v / rhs };
                }
                Some(Tok::Num(_)) | Some(Tok::Op('(')) => v *= self.unary()?,
                _ => return Ok(v),
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<f64, String> {
        match self.peek().cloned() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            Some(Tok::Num(x)) => {
                self.pos += 1;
                Ok(x)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err("missing `)`".into());
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err("expected a number, `pi` or `(`".into()),
        }
    }
}
