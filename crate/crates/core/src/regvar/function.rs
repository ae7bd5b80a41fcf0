use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::powerlog::PowerLog;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    Nonincreasing,
    Nondecreasing,
    None,
}

type LnFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A positive function on `[1, ∞)`, evaluated primarily in log coordinates:
/// `ln_at_ln(u) = ln f(e^u)`. This keeps arguments like `t = e^{10^4}` usable.
#[derive(Clone)]
pub struct ComparisonFunction {
    node: Arc<Node>,
    index: Option<f64>,
    monotone: Monotonicity,
}

enum Node {
    PowerLog(PowerLog),
    Constant(f64),
    Tabulated(Table),
    Scaled(ComparisonFunction, f64),
    Cap(ComparisonFunction, f64),
    Min(ComparisonFunction, ComparisonFunction),
    Product(ComparisonFunction, ComparisonFunction),
    Quotient(ComparisonFunction, ComparisonFunction),
    Powf(ComparisonFunction, f64),
    Custom { ln_fn: Box<LnFn>, label: String },
    Smoothed(super::smooth::Smoothed),
}

/// Two-column table `(t, f)`, interpolated linearly in `(ln t, ln f)` and
/// extrapolated with the last segment's slope.
#[derive(Debug, Clone)]
pub struct Table {
    ln_t: Vec<f64>,
    ln_f: Vec<f64>,
}

impl Table {
    pub fn new(t: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if t.len() != f.len() || t.len() < 2 {
            return Err(Error::Validation("table needs at least two (t, f) rows".into()));
        }
        for w in t.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Validation("table t column must be strictly increasing".into()));
            }
        }
        if t[0] < 1.0 || f.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::Validation("table needs t ≥ 1 and positive finite f".into()));
        }
        Ok(Table { ln_t: t.iter().map(|x| x.ln()).collect(), ln_f: f.iter().map(|x| x.ln()).collect() })
    }

    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_path(path)?;
        let (mut t, mut f) = (Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() < 2 {
                return Err(Error::Parse(format!("{}: expected two columns", path.display())));
            }
            t.push(parse_num(&rec[0])?);
            f.push(parse_num(&rec[1])?);
        }
        Table::new(t, f)
    }

    fn ln_at_ln(&self, u: f64) -> f64 {
        let n = self.ln_t.len();
        if u <= self.ln_t[0] {
            return self.ln_f[0];
        }
        let i = match self.ln_t.binary_search_by(|x| x.partial_cmp(&u).unwrap()) {
            Ok(i) => return self.ln_f[i],
            Err(i) => i.min(n - 1),
        };
        let (u0, u1, v0, v1) = (self.ln_t[i - 1], self.ln_t[i], self.ln_f[i - 1], self.ln_f[i]);
        v0 + (v1 - v0) * (u - u0) / (u1 - u0)
    }

    fn tail_slope(&self) -> f64 {
        let n = self.ln_t.len();
        (self.ln_f[n - 1] - self.ln_f[n - 2]) / (self.ln_t[n - 1] - self.ln_t[n - 2])
    }
}

pub(crate) fn parse_num(s: &str) -> Result<f64> {
    let s = s.trim();
    match s {
        "inf" | "+inf" | "Inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: '{s}'"))),
    }
}

impl ComparisonFunction {
    fn wrap(node: Node, index: Option<f64>, monotone: Monotonicity) -> Self {
        ComparisonFunction { node: Arc::new(node), index, monotone }
    }

    pub fn powerlog(p: PowerLog) -> Self {
        // below the domain start the value is constant, so sign-definite
        // exponents give monotonicity on all of [1, ∞)
        let mono = if p.power <= 0.0 && p.logpower <= 0.0 && p.loglog <= 0.0 {
            Monotonicity::Nonincreasing
        } else if p.power >= 0.0 && p.logpower >= 0.0 && p.loglog >= 0.0 {
            Monotonicity::Nondecreasing
        } else {
            Monotonicity::None
        };
        Self::wrap(Node::PowerLog(p), Some(p.power), mono)
    }

    /// `t^a`.
    pub fn power(a: f64) -> Self {
        Self::powerlog(PowerLog::power(a))
    }

    pub fn constant(c: f64) -> Self {
        assert!(c > 0.0, "constant comparison function must be positive");
        Self::wrap(Node::Constant(c), Some(0.0), Monotonicity::Nonincreasing)
    }

    pub fn tabulated(table: Table) -> Self {
        let slope = table.tail_slope();
        let mono = if table.ln_f.windows(2).all(|w| w[1] <= w[0]) && slope <= 0.0 {
            Monotonicity::Nonincreasing
        } else if table.ln_f.windows(2).all(|w| w[1] >= w[0]) && slope >= 0.0 {
            Monotonicity::Nondecreasing
        } else {
            Monotonicity::None
        };
        Self::wrap(Node::Tabulated(table), Some(slope), mono)
    }

    /// Function given in ordinary coordinates.
    pub fn from_fn<F>(f: F, label: &str, index: Option<f64>, monotone: Monotonicity) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_ln_fn(move |u: f64| f(u.exp()).ln(), label, index, monotone)
    }

    /// Function given as `u ↦ ln f(e^u)`.
    pub fn from_ln_fn<F>(ln_fn: F, label: &str, index: Option<f64>, monotone: Monotonicity) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::wrap(Node::Custom { ln_fn: Box::new(ln_fn), label: label.to_string() }, index, monotone)
    }

    pub(crate) fn smoothed(s: super::smooth::Smoothed, index: Option<f64>) -> Self {
        Self::wrap(Node::Smoothed(s), index, Monotonicity::Nonincreasing)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        assert!(alpha > 0.0, "scale factor must be positive");
        Self::wrap(Node::Scaled(self.clone(), alpha), self.index, self.monotone)
    }

    /// `min(f, α)`.
    pub fn capped(&self, alpha: f64) -> Self {
        assert!(alpha > 0.0, "cap must be positive");
        let idx = self.index.map(|a| a.min(0.0));
        let mono = match self.monotone {
            Monotonicity::Nondecreasing => Monotonicity::Nondecreasing,
            Monotonicity::Nonincreasing => Monotonicity::Nonincreasing,
            Monotonicity::None => Monotonicity::None,
        };
        Self::wrap(Node::Cap(self.clone(), alpha), idx, mono)
    }

    pub fn min_with(&self, g: &ComparisonFunction) -> Self {
        let idx = match (self.index, g.index) {
            (Some(a), Some(b)) => Some(a.min(b)),
            _ => None,
        };
        let mono = if self.monotone == g.monotone { self.monotone } else { Monotonicity::None };
        Self::wrap(Node::Min(self.clone(), g.clone()), idx, mono)
    }

    pub fn mul(&self, g: &ComparisonFunction) -> Self {
        let idx = self.index.zip(g.index).map(|(a, b)| a + b);
        let mono = if self.monotone == g.monotone { self.monotone } else { Monotonicity::None };
        Self::wrap(Node::Product(self.clone(), g.clone()), idx, mono)
    }

    pub fn div(&self, g: &ComparisonFunction) -> Self {
        let idx = self.index.zip(g.index).map(|(a, b)| a - b);
        let mono = match (self.monotone, g.monotone) {
            (Monotonicity::Nonincreasing, Monotonicity::Nondecreasing) => Monotonicity::Nonincreasing,
            (Monotonicity::Nondecreasing, Monotonicity::Nonincreasing) => Monotonicity::Nondecreasing,
            _ => Monotonicity::None,
        };
        Self::wrap(Node::Quotient(self.clone(), g.clone()), idx, mono)
    }

    pub fn powf(&self, r: f64) -> Self {
        let mono = if r == 0.0 {
            Monotonicity::Nonincreasing
        } else if r > 0.0 {
            self.monotone
        } else {
            match self.monotone {
                Monotonicity::Nonincreasing => Monotonicity::Nondecreasing,
                Monotonicity::Nondecreasing => Monotonicity::Nonincreasing,
                Monotonicity::None => Monotonicity::None,
            }
        };
        Self::wrap(Node::Powf(self.clone(), r), self.index.map(|a| a * r), mono)
    }

    pub fn with_index(mut self, index: Option<f64>) -> Self {
        self.index = index;
        self
    }

    pub fn with_monotonicity(mut self, m: Monotonicity) -> Self {
        self.monotone = m;
        self
    }

    pub fn index(&self) -> Option<f64> {
        self.index
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotone
    }

    /// The symbolic form, when the function is a bare power-log.
    pub fn as_powerlog(&self) -> Option<PowerLog> {
        match &*self.node {
            Node::PowerLog(p) => Some(*p),
            Node::Scaled(f, a) => f.as_powerlog().map(|p| p.scale(*a)),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.ln_at_ln(t.max(1.0).ln()).exp()
    }

    pub fn ln_eval(&self, t: f64) -> f64 {
        self.ln_at_ln(t.max(1.0).ln())
    }

    /// `ln f(e^u)` for `u ≥ 0`.
    pub fn ln_at_ln(&self, u: f64) -> f64 {
        let u = u.max(0.0);
        match &*self.node {
            Node::PowerLog(p) => p.ln_at_ln(u),
            Node::Constant(c) => c.ln(),
            Node::Tabulated(t) => {
                let n = t.ln_t.len();
                if u > t.ln_t[n - 1] {
                    t.ln_f[n - 1] + t.tail_slope() * (u - t.ln_t[n - 1])
                } else {
                    t.ln_at_ln(u)
                }
            }
            Node::Scaled(f, a) => f.ln_at_ln(u) + a.ln(),
            Node::Cap(f, a) => f.ln_at_ln(u).min(a.ln()),
            Node::Min(f, g) => f.ln_at_ln(u).min(g.ln_at_ln(u)),
            Node::Product(f, g) => f.ln_at_ln(u) + g.ln_at_ln(u),
            Node::Quotient(f, g) => f.ln_at_ln(u) - g.ln_at_ln(u),
            Node::Powf(f, r) => {
                if *r == 0.0 {
                    0.0
                } else {
                    r * f.ln_at_ln(u)
                }
            }
            Node::Custom { ln_fn, .. } => ln_fn(u),
            Node::Smoothed(s) => s.ln_at_ln(u),
        }
    }

    /// Samples the monotonicity flag on a geometric grid; true if consistent.
    pub fn check_monotonicity(&self, t_max: f64, points: usize) -> bool {
        let n = points.max(2);
        let umax = t_max.max(1.0).ln();
        let vals: Vec<f64> = (0..n).map(|i| self.ln_at_ln(umax * i as f64 / (n - 1) as f64)).collect();
        let tol = 1e-12;
        match self.monotone {
            Monotonicity::Nonincreasing => vals.windows(2).all(|w| w[1] <= w[0] + tol * w[0].abs().max(1.0)),
            Monotonicity::Nondecreasing => vals.windows(2).all(|w| w[1] + tol * w[0].abs().max(1.0) >= w[0]),
            Monotonicity::None => true,
        }
    }

    /// Parses the expression grammar: `powerlog(c, a, b[, e])`, `power(a)`,
    /// `const(c)`, `tabulated(path.csv)`, `scaled(expr, α)`, `min(expr, α)`,
    /// `min(expr, expr)`. Relative paths resolve against `base`.
    pub fn parse(src: &str, base: Option<&Path>) -> Result<Self> {
        let mut p = Parser { s: src.as_bytes(), pos: 0, base };
        let f = p.expr()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!("trailing input in '{src}'")));
        }
        Ok(f)
    }
}

impl fmt::Debug for ComparisonFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ComparisonFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::PowerLog(p) => write!(f, "{p}"),
            Node::Constant(c) => write!(f, "{c}"),
            Node::Tabulated(t) => write!(f, "tabulated[{} rows]", t.ln_t.len()),
            Node::Scaled(g, a) => write!(f, "{a}·({g})"),
            Node::Cap(g, a) => write!(f, "min({g}, {a})"),
            Node::Min(g, h) => write!(f, "min({g}, {h})"),
            Node::Product(g, h) => write!(f, "({g})·({h})"),
            Node::Quotient(g, h) => write!(f, "({g})/({h})"),
            Node::Powf(g, r) => write!(f, "({g})^{r}"),
            Node::Custom { label, .. } => write!(f, "{label}"),
            Node::Smoothed(_) => write!(f, "smoothened"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    base: Option<&'a Path>,
}

impl<'a> Parser<'a> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.pos < self.s.len() && self.s[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{}' at offset {}", c as char, self.pos)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn ident(&mut self) -> String {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn raw_arg(&mut self) -> String {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos] != b',' && self.s[self.pos] != b')' {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).trim().to_string()
    }

    fn number(&mut self) -> Result<f64> {
        let raw = self.raw_arg();
        parse_num(&raw)
    }

    fn expr(&mut self) -> Result<ComparisonFunction> {
        let name = self.ident();
        self.eat(b'(')?;
        let f = match name.as_str() {
            "powerlog" => {
                let c = self.number()?;
                self.eat(b',')?;
                let a = self.number()?;
                self.eat(b',')?;
                let b = self.number()?;
                let e = if self.peek() == Some(b',') {
                    self.eat(b',')?;
                    self.number()?
                } else {
                    0.0
                };
                ComparisonFunction::powerlog(PowerLog::with_loglog(c, a, b, e)?)
            }
            "power" => ComparisonFunction::power(self.number()?),
            "const" => {
                let c = self.number()?;
                if !(c > 0.0) {
                    return Err(Error::Parse("const(c) needs c > 0".into()));
                }
                ComparisonFunction::constant(c)
            }
            "tabulated" => {
                let raw = self.raw_arg();
                let path = match self.base {
                    Some(b) if Path::new(&raw).is_relative() => b.join(&raw),
                    _ => Path::new(&raw).to_path_buf(),
                };
                ComparisonFunction::tabulated(Table::from_csv(&path)?)
            }
            "scaled" | "min" => {
                let inner = self.expr()?;
                self.eat(b',')?;
                let save = self.pos;
                let id = self.ident();
                let is_expr = !id.is_empty() && id != "inf" && self.peek() == Some(b'(');
                self.pos = save;
                if name == "min" && is_expr {
                    let other = self.expr()?;
                    inner.min_with(&other)
                } else {
                    let a = self.number()?;
                    if !(a > 0.0) {
                        return Err(Error::Parse(format!("{name} needs a positive constant")));
                    }
                    if name == "scaled" {
                        inner.scaled(a)
                    } else {
                        inner.capped(a)
                    }
                }
            }
            "" => return Err(Error::Parse("expected a function name".into())),
            other => return Err(Error::Parse(format!("unknown function '{other}'"))),
        };
        self.eat(b')')?;
        Ok(f)
    }
}
