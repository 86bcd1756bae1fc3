//! Rational polyhedral subsets of `Q^n`, `n <= 2`: o-minimal Euler
//! characteristic and the lattice sums `alpha_m`.
//!
//! Sets are finite disjoint unions of relatively open pieces. Text syntax:
//!
//! ```text
//! set     := piece (' u ' piece)*
//! piece   := factor (' x ' factor)?          products of 1-dimensional factors
//!          | '{(' q ',' q ')}'              a point in the plane
//!          | 'segment((' q ',' q '),(' q ',' q '))'
//!          | 'polygon((' q ',' q '),...)'   vertices counterclockwise
//! factor  := '(' lo ',' hi ')' | '{' q '}'
//!          | '[' lo ',' hi ']' | '[' lo ',' hi ')' | '(' lo ',' hi ']'
//! ```
//!
//! Closed and half-open intervals expand into an open interval and points.
//! Endpoints are rationals `p` or `p/r`, or `-inf` / `inf`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::gring::{LPoly, MotClass};

pub type Q = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("set syntax: {0}")]
    Syntax(String),
    #[error("set is unbounded")]
    Unbounded,
    #[error("piece {0} is empty")]
    EmptyPiece(String),
    #[error("pieces {0} and {1} overlap")]
    Overlap(String, String),
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
}

/// `coeffs . x = value` or `coeffs . x > value`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Linear {
    coeffs: Vec<Q>,
    value: Q,
}

impl Linear {
    fn new(coeffs: Vec<Q>, value: Q) -> Self {
        Linear { coeffs, value }
    }

    fn eval(&self, x: &[Q]) -> Q {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    Point(Vec<Q>),
    /// Open interval; `None` is an infinite end.
    Interval(Option<Q>, Option<Q>),
    /// Product of two 1-dimensional shapes.
    Product(Box<Shape>, Box<Shape>),
    Segment([Q; 2], [Q; 2]),
    Polygon(Vec<[Q; 2]>),
}

/// A relatively open polyhedron, optionally cut by extra hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    shape: Shape,
    cuts: Vec<Linear>,
}

fn q(n: i128) -> Q {
    Q::from_integer(n)
}

fn unit(n: usize, i: usize, s: i128) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = q(s);
    v
}

impl Shape {
    fn ambient(&self) -> usize {
        match self {
            Shape::Point(x) => x.len(),
            Shape::Interval(..) => 1,
            Shape::Product(..) | Shape::Segment(..) | Shape::Polygon(_) => 2,
        }
    }

    /// Equalities and strict inequalities in variables `offset..offset+ambient`
    /// of an `n`-dimensional space.
    fn constraints(&self, n: usize, offset: usize, eqs: &mut Vec<Linear>, gts: &mut Vec<Linear>) {
        match self {
            Shape::Point(x) => {
                for (i, c) in x.iter().enumerate() {
                    eqs.push(Linear::new(unit(n, offset + i, 1), *c));
                }
            }
            Shape::Interval(lo, hi) => {
                if let Some(lo) = lo {
                    gts.push(Linear::new(unit(n, offset, 1), *lo));
                }
                if let Some(hi) = hi {
                    gts.push(Linear::new(unit(n, offset, -1), -hi));
                }
            }
            Shape::Product(a, b) => {
                a.constraints(n, offset, eqs, gts);
                b.constraints(n, offset + 1, eqs, gts);
            }
            Shape::Segment(p, r) => {
                let d = [r[0] - p[0], r[1] - p[1]];
                let normal = vec![-d[1], d[0]];
                let along = vec![d[0], d[1]];
                let lin = |c: &Vec<Q>, x: &[Q; 2]| c[0] * x[0] + c[1] * x[1];
                eqs.push(Linear::new(normal.clone(), lin(&normal, p)));
                gts.push(Linear::new(along.clone(), lin(&along, p)));
                let back: Vec<Q> = along.iter().map(|c| -c).collect();
                gts.push(Linear::new(back.clone(), lin(&back, r)));
            }
            Shape::Polygon(vs) => {
                for i in 0..vs.len() {
                    let (v, w) = (vs[i], vs[(i + 1) % vs.len()]);
                    let e = [w[0] - v[0], w[1] - v[1]];
                    // interior lies to the left of each edge
                    let c = vec![-e[1], e[0]];
                    let value = c[0] * v[0] + c[1] * v[1];
                    gts.push(Linear::new(c, value));
                }
            }
        }
    }

    /// Coordinate ranges, `None` when unbounded.
    fn bbox(&self) -> Option<Vec<(Q, Q)>> {
        match self {
            Shape::Point(x) => Some(x.iter().map(|c| (*c, *c)).collect()),
            Shape::Interval(lo, hi) => Some(vec![((*lo)?, (*hi)?)]),
            Shape::Product(a, b) => {
                let mut v = a.bbox()?;
                v.extend(b.bbox()?);
                Some(v)
            }
            Shape::Segment(p, r) => Some(vec![
                (p[0].min(r[0]), p[0].max(r[0])),
                (p[1].min(r[1]), p[1].max(r[1])),
            ]),
            Shape::Polygon(vs) => Some(
                (0..2)
                    .map(|i| {
                        let lo = vs.iter().map(|v| v[i]).min().expect("vertices");
                        let hi = vs.iter().map(|v| v[i]).max().expect("vertices");
                        (lo, hi)
                    })
                    .collect(),
            ),
        }
    }
}

fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pair = |v: &[Q; 2]| format!("({},{})", fmt_q(&v[0]), fmt_q(&v[1]));
        match self {
            Shape::Point(x) if x.len() == 1 => write!(f, "{{{}}}", fmt_q(&x[0])),
            Shape::Point(x) => write!(f, "{{{}}}", pair(&[x[0], x[1]])),
            Shape::Interval(lo, hi) => write!(
                f,
                "({},{})",
                lo.map_or("-inf".to_string(), |x| fmt_q(&x)),
                hi.map_or("inf".to_string(), |x| fmt_q(&x))
            ),
            Shape::Product(a, b) => write!(f, "{a} x {b}"),
            Shape::Segment(p, r) => write!(f, "segment({},{})", pair(p), pair(r)),
            Shape::Polygon(vs) => {
                let v: Vec<String> = vs.iter().map(pair).collect();
                write!(f, "polygon({})", v.join(","))
            }
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shape)?;
        for c in &self.cuts {
            let coeffs: Vec<String> = c.coeffs.iter().map(fmt_q).collect();
            write!(f, " cut [{}] = {}", coeffs.join(","), fmt_q(&c.value))?;
        }
        Ok(())
    }
}

/// Substitutes equalities away, then decides the strict system by
/// Fourier-Motzkin elimination (exact for strict inequalities).
fn feasible(n: usize, eqs: &[Linear], gts: &[Linear]) -> bool {
    let mut eqs: Vec<Linear> = eqs.to_vec();
    let mut gts: Vec<Linear> = gts.to_vec();
    while let Some(e) = eqs.pop() {
        let Some(p) = (0..n).find(|&i| !e.coeffs[i].is_zero()) else {
            if !e.value.is_zero() {
                return false;
            }
            continue;
        };
        let substitute = |l: &mut Linear| {
            let factor = l.coeffs[p] / e.coeffs[p];
            if factor.is_zero() {
                return;
            }
            for i in 0..n {
                l.coeffs[i] -= factor * e.coeffs[i];
            }
            l.value -= factor * e.value;
        };
        eqs.iter_mut().for_each(substitute);
        gts.iter_mut().for_each(substitute);
    }
    for j in 0..n {
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for l in gts {
            let a = l.coeffs[j];
            if a.is_positive() {
                lower.push(l);
            } else if a.is_negative() {
                upper.push(l);
            } else {
                rest.push(l);
            }
        }
        for lo in &lower {
            for up in &upper {
                let (s, t) = (lo.coeffs[j].recip(), -up.coeffs[j].recip());
                let coeffs = (0..n).map(|i| lo.coeffs[i] * s + up.coeffs[i] * t).collect();
                rest.push(Linear::new(coeffs, lo.value * s + up.value * t));
            }
        }
        gts = rest;
    }
    gts.iter().all(|l| l.value.is_negative())
}

fn rank(n: usize, rows: &[Linear]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.coeffs.clone()).collect();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c] / m[r][c];
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x -= f * y;
                }
            }
        }
        r += 1;
    }
    r
}

impl Piece {
    pub fn point(x: Vec<Q>) -> Result<Piece, GammaError> {
        if !(1..=2).contains(&x.len()) {
            return Err(GammaError::Syntax("points have one or two coordinates".into()));
        }
        Ok(Piece::from_shape(Shape::Point(x)))
    }

    /// Open interval `(lo, hi)`; `None` is an infinite end.
    pub fn interval(lo: Option<Q>, hi: Option<Q>) -> Result<Piece, GammaError> {
        if let (Some(a), Some(b)) = (lo, hi) {
            if a >= b {
                return Err(GammaError::EmptyPiece(format!("({},{})", fmt_q(&a), fmt_q(&b))));
            }
        }
        Ok(Piece::from_shape(Shape::Interval(lo, hi)))
    }

    /// Product of two 1-dimensional pieces.
    pub fn product(a: &Piece, b: &Piece) -> Result<Piece, GammaError> {
        for p in [a, b] {
            if p.ambient() != 1 || !p.cuts.is_empty() {
                return Err(GammaError::DimensionMismatch { expected: 1, found: p.ambient() });
            }
        }
        let shape = match (&a.shape, &b.shape) {
            (Shape::Point(x), Shape::Point(y)) => Shape::Point(vec![x[0], y[0]]),
            (x, y) => Shape::Product(Box::new(x.clone()), Box::new(y.clone())),
        };
        Ok(Piece::from_shape(shape))
    }

    pub fn segment(p: [Q; 2], r: [Q; 2]) -> Result<Piece, GammaError> {
        if p == r {
            return Err(GammaError::EmptyPiece("degenerate segment".into()));
        }
        Ok(Piece::from_shape(Shape::Segment(p, r)))
    }

    /// Open convex polygon; vertices counterclockwise, no three collinear.
    pub fn polygon(vertices: Vec<[Q; 2]>) -> Result<Piece, GammaError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GammaError::InvalidPolygon("at least three vertices are needed".into()));
        }
        for i in 0..n {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if !cross.is_positive() {
                return Err(GammaError::InvalidPolygon(
                    "vertices must be counterclockwise and strictly convex".into(),
                ));
            }
        }
        Ok(Piece::from_shape(Shape::Polygon(vertices)))
    }

    fn from_shape(shape: Shape) -> Piece {
        Piece { shape, cuts: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.shape.ambient()
    }

    fn system(&self) -> (Vec<Linear>, Vec<Linear>) {
        let (mut eqs, mut gts) = (Vec::new(), Vec::new());
        self.shape.constraints(self.ambient(), 0, &mut eqs, &mut gts);
        eqs.extend(self.cuts.iter().cloned());
        (eqs, gts)
    }

    pub fn is_empty(&self) -> bool {
        let (eqs, gts) = self.system();
        !feasible(self.ambient(), &eqs, &gts)
    }

    /// Intrinsic dimension of a nonempty piece.
    pub fn dimension(&self) -> usize {
        let (eqs, _) = self.system();
        self.ambient() - rank(self.ambient(), &eqs)
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        let (eqs, gts) = self.system();
        eqs.iter().all(|l| l.eval(x) == l.value) && gts.iter().all(|l| l.eval(x) > l.value)
    }

    fn meets(&self, other: &Piece) -> bool {
        let (mut eqs, mut gts) = self.system();
        let (e2, g2) = other.system();
        eqs.extend(e2);
        gts.extend(g2);
        feasible(self.ambient(), &eqs, &gts)
    }

    pub fn is_bounded(&self) -> bool {
        self.shape.bbox().is_some()
    }

    /// The piece cut by `l(x) = value`, or `None` if that is empty.
    pub fn restrict(&self, l: &AffineFunctional, value: Q) -> Option<Piece> {
        let mut out = self.clone();
        out.cuts.push(Linear::new(
            l.coeffs.iter().map(|&c| q(c as i128)).collect(),
            value - l.constant,
        ));
        (!out.is_empty()).then_some(out)
    }

    fn lattice_points(&self, m: u64) -> Result<Vec<Vec<Q>>, GammaError> {
        let bbox = self.shape.bbox().ok_or(GammaError::Unbounded)?;
        let m = m as i128;
        let ranges: Vec<(i128, i128)> = bbox
            .iter()
            .map(|(lo, hi)| ((lo * q(m)).ceil().to_integer(), (hi * q(m)).floor().to_integer()))
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![Q::zero(); ranges.len()];
        fn rec(i: usize, ranges: &[(i128, i128)], m: i128, cur: &mut Vec<Q>, p: &Piece, out: &mut Vec<Vec<Q>>) {
            if i == ranges.len() {
                if p.contains(cur) {
                    out.push(cur.clone());
                }
                return;
            }
            for j in ranges[i].0..=ranges[i].1 {
                cur[i] = Q::new(j, m);
                rec(i + 1, ranges, m, cur, p, out);
            }
        }
        rec(0, &ranges, m, &mut cur, self, &mut out);
        Ok(out)
    }
}

/// A finite disjoint union of pieces in `Q^n`, `n in {1, 2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSet {
    dimension: usize,
    pieces: Vec<Piece>,
}

impl GammaSet {
    /// Validates that pieces are nonempty, of the right ambient dimension
    /// and pairwise disjoint.
    pub fn new(dimension: usize, pieces: Vec<Piece>) -> Result<GammaSet, GammaError> {
        if !(1..=2).contains(&dimension) {
            return Err(GammaError::DimensionMismatch { expected: 2, found: dimension });
        }
        for p in &pieces {
            if p.ambient() != dimension {
                return Err(GammaError::DimensionMismatch { expected: dimension, found: p.ambient() });
            }
            if p.is_empty() {
                return Err(GammaError::EmptyPiece(p.to_string()));
            }
        }
        for (i, a) in pieces.iter().enumerate() {
            if let Some(b) = pieces[i + 1..].iter().find(|b| a.meets(b)) {
                return Err(GammaError::Overlap(a.to_string(), b.to_string()));
            }
        }
        Ok(GammaSet { dimension, pieces })
    }

    pub fn empty(dimension: usize) -> GammaSet {
        GammaSet { dimension, pieces: Vec::new() }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_bounded(&self) -> bool {
        self.pieces.iter().all(Piece::is_bounded)
    }

    /// Disjoint union; fails if the sets overlap.
    pub fn union(&self, other: &GammaSet) -> Result<GammaSet, GammaError> {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        GammaSet::new(self.dimension, pieces)
    }

    /// Product of two 1-dimensional sets.
    pub fn product(&self, other: &GammaSet) -> Result<GammaSet, GammaError> {
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                pieces.push(Piece::product(a, b)?);
            }
        }
        GammaSet::new(2, pieces)
    }

    /// The fiber `{x : l(x) = value}`.
    pub fn fiber(&self, l: &AffineFunctional, value: Q) -> GammaSet {
        GammaSet {
            dimension: self.dimension,
            pieces: self.pieces.iter().filter_map(|p| p.restrict(l, value)).collect(),
        }
    }
}

impl fmt::Display for GammaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.pieces.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" u "))
    }
}

fn parse_q(s: &str) -> Result<Q, GammaError> {
    let bad = || GammaError::Syntax(format!("bad rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(q(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_end(s: &str, low: bool) -> Result<Option<Q>, GammaError> {
    match (s.trim(), low) {
        ("-inf", true) | ("inf", false) | ("+inf", false) => Ok(None),
        (t, _) if t.ends_with("inf") => Err(GammaError::Syntax(format!("infinite end {t:?} on the wrong side"))),
        (t, _) => parse_q(t).map(Some),
    }
}

fn parse_pair(s: &str) -> Result<[Q; 2], GammaError> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| GammaError::Syntax(format!("expected (a,b), got {s:?}")))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| GammaError::Syntax(format!("expected (a,b), got {s:?}")))?;
    Ok([parse_q(a)?, parse_q(b)?])
}

fn parse_pairs(s: &str) -> Result<Vec<[Q; 2]>, GammaError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| GammaError::Syntax(format!("expected a vertex list, got {s:?}")))?;
    inner
        .split("),(")
        .map(|p| {
            let p = p.trim_start_matches('(').trim_end_matches(')');
            parse_pair(&format!("({p})"))
        })
        .collect()
}

/// A 1-dimensional factor, expanded into open pieces.
fn parse_factor(s: &str) -> Result<Vec<Piece>, GammaError> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        return Ok(vec![Piece::point(vec![parse_q(inner)?])?]);
    }
    let bad = || GammaError::Syntax(format!("expected an interval or point, got {s:?}"));
    let open_lo = match s.chars().next() {
        Some('(') => true,
        Some('[') => false,
        _ => return Err(bad()),
    };
    let open_hi = match s.chars().last() {
        Some(')') => true,
        Some(']') => false,
        _ => return Err(bad()),
    };
    let (a, b) = s[1..s.len() - 1].split_once(',').ok_or_else(bad)?;
    let (lo, hi) = (parse_end(a, true)?, parse_end(b, false)?);
    let mut out = Vec::new();
    if !open_lo {
        out.push(Piece::point(vec![lo.ok_or_else(bad)?])?);
    }
    if lo != hi || lo.is_none() {
        out.push(Piece::interval(lo, hi)?);
    } else if open_lo || open_hi {
        return Err(GammaError::EmptyPiece(s.to_string()));
    }
    if !open_hi && (lo != hi || open_lo) {
        out.push(Piece::point(vec![hi.ok_or_else(bad)?])?);
    }
    Ok(out)
}

fn parse_piece(s: &str) -> Result<Vec<Piece>, GammaError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("polygon") {
        return Ok(vec![Piece::polygon(parse_pairs(rest)?)?]);
    }
    if let Some(rest) = s.strip_prefix("segment") {
        let v = parse_pairs(rest)?;
        let [p, r] = v[..] else {
            return Err(GammaError::Syntax("a segment has two endpoints".into()));
        };
        return Ok(vec![Piece::segment(p, r)?]);
    }
    if let Some(inner) = s.strip_prefix("{(").and_then(|r| r.strip_suffix(")}")) {
        let p = parse_pair(&format!("({inner})"))?;
        return Ok(vec![Piece::point(p.to_vec())?]);
    }
    let factors: Vec<&str> = s.split(" x ").collect();
    match factors[..] {
        [f] => parse_factor(f),
        [f, g] => {
            let (a, b) = (parse_factor(f)?, parse_factor(g)?);
            a.iter()
                .flat_map(|x| b.iter().map(move |y| Piece::product(x, y)))
                .collect()
        }
        _ => Err(GammaError::Syntax("products have at most two factors".into())),
    }
}

/// Parses the set grammar of the module documentation.
pub fn parse_set(s: &str) -> Result<GammaSet, GammaError> {
    let normalized = s.split_whitespace().collect::<Vec<_>>().join(" ");
    if normalized == "{}" {
        return Err(GammaError::Syntax("the empty set has no dimension; use GammaSet::empty".into()));
    }
    let mut pieces = Vec::new();
    for part in normalized.split(" u ") {
        pieces.extend(parse_piece(part)?);
    }
    let dimension = pieces.first().map(Piece::ambient).unwrap_or(1);
    GammaSet::new(dimension, pieces)
}

impl FromStr for GammaSet {
    type Err = GammaError;
    fn from_str(s: &str) -> Result<Self, GammaError> {
        parse_set(s)
    }
}

/// `l(x) = coeffs . x + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFunctional {
    coeffs: Vec<i64>,
    constant: Q,
}

impl AffineFunctional {
    pub fn new(coeffs: Vec<i64>, constant: Q) -> Self {
        AffineFunctional { coeffs, constant }
    }

    pub fn zero(n: usize) -> Self {
        AffineFunctional::new(vec![0; n], Q::zero())
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn constant(&self) -> Q {
        self.constant
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.coeffs
            .iter()
            .zip(x)
            .map(|(&a, b)| q(a as i128) * b)
            .sum::<Q>()
            + self.constant
    }
}

/// `sum over pieces of (-1)^dim`.
pub fn ominimal_chi(s: &GammaSet) -> i64 {
    s.pieces
        .iter()
        .map(|p| if p.dimension() % 2 == 0 { 1 } else { -1 })
        .sum()
}

/// Points of `s` in `((1/m) Z)^n`, sorted.
pub fn lattice_points(s: &GammaSet, m: u64) -> Result<Vec<Vec<Q>>, GammaError> {
    if m == 0 {
        return Err(GammaError::Syntax("m must be positive".into()));
    }
    let mut out = Vec::new();
    for p in &s.pieces {
        out.extend(p.lattice_points(m)?);
    }
    out.sort();
    Ok(out)
}

fn one_minus_l_power(n: usize) -> LPoly {
    LPoly::from_terms([(1, 1), (0, -1)]).pow(n as u32)
}

/// `sum over gamma in s(m) with m l(gamma) integral of
/// L^(-m(|gamma| + l(gamma))) (L - 1)^n`. Lattice points where `m l` is not
/// integral contribute nothing.
pub fn alpha_m(delta: &GammaSet, l: &AffineFunctional, m: u64) -> Result<MotClass, GammaError> {
    if l.coeffs.len() != delta.dimension {
        return Err(GammaError::DimensionMismatch { expected: delta.dimension, found: l.coeffs.len() });
    }
    let mq = q(m as i128);
    let mut sum = LPoly::zero();
    for g in lattice_points(delta, m)? {
        let e = l.eval(&g) * mq;
        if !e.is_integer() {
            continue;
        }
        let size: Q = g.iter().sum::<Q>() * mq;
        sum = sum + LPoly::l_pow(-(size.to_integer() + e.to_integer()) as i64);
    }
    Ok(MotClass::from_lpoly(sum * one_minus_l_power(delta.dimension)))
}

/// `alpha_m` with `l = 0`.
pub fn alpha_tilde(delta: &GammaSet, m: u64) -> Result<MotClass, GammaError> {
    alpha_m(delta, &AffineFunctional::zero(delta.dimension), m)
}

/// `alpha_m` assembled from the fibers of `l`:
/// `sum over integers e of alpha_tilde(delta cut by l = e/m) L^-e`.
pub fn alpha_by_fibers(delta: &GammaSet, l: &AffineFunctional, m: u64) -> Result<MotClass, GammaError> {
    if !delta.is_bounded() {
        return Err(GammaError::Unbounded);
    }
    let mq = q(m as i128);
    // range of m l over the bounding boxes
    let (mut lo, mut hi): (Option<Q>, Option<Q>) = (None, None);
    for p in &delta.pieces {
        let bbox = p.shape.bbox().expect("bounded");
        let mut a = l.constant;
        let mut b = l.constant;
        for (&c, (x, y)) in l.coeffs.iter().zip(bbox) {
            let (u, v) = (q(c as i128) * x, q(c as i128) * y);
            a += u.min(v);
            b += u.max(v);
        }
        lo = Some(lo.map_or(a, |x| x.min(a)));
        hi = Some(hi.map_or(b, |x| x.max(b)));
    }
    let Some((lo, hi)) = lo.zip(hi) else {
        return Ok(MotClass::zero());
    };
    let mut total = MotClass::zero();
    let (from, to) = ((lo * mq).ceil().to_integer(), (hi * mq).floor().to_integer());
    for e in from..=to {
        let fiber = delta.fiber(l, Q::new(e, m as i128));
        if !fiber.pieces.is_empty() {
            total = &total + &alpha_tilde(&fiber, m)?.mul_l_pow(-(e as i64));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> GammaSet {
        parse_set(s).unwrap()
    }

    fn lp(terms: &[(i64, i64)]) -> MotClass {
        MotClass::from_lpoly(LPoly::from_terms(terms.iter().copied()))
    }

    #[test]
    fn chi_examples() {
        assert_eq!(ominimal_chi(&set("(0,1)")), -1);
        assert_eq!(ominimal_chi(&set("{1/2}")), 1);
        assert_eq!(ominimal_chi(&set("(0,1]")), 0);
        assert_eq!(set("(0,1]").pieces().len(), 2);
        assert_eq!(ominimal_chi(&set("[0,1]")), 1);
        assert_eq!(ominimal_chi(&set("(0,inf)")), -1);
        assert_eq!(ominimal_chi(&set("(-inf,inf)")), -1);
        assert_eq!(ominimal_chi(&set("[0,inf)")), 0);
        assert_eq!(ominimal_chi(&set("polygon((0,0),(1,0),(0,1))")), 1);
        assert_eq!(ominimal_chi(&set("segment((0,0),(1,1)) u {(2,2)}")), 0);
        assert_eq!(ominimal_chi(&set("(0,1) x [0,1]")), -1);
    }

    #[test]
    fn validation() {
        assert!(matches!(parse_set("(0,2) u (1,3)"), Err(GammaError::Overlap(..))));
        assert!(matches!(parse_set("(0,1) u {1/2}"), Err(GammaError::Overlap(..))));
        assert!(parse_set("(0,1) u {1}").is_ok());
        assert!(matches!(parse_set("(1,1)"), Err(GammaError::EmptyPiece(_))));
        assert!(matches!(parse_set("polygon((0,0),(0,1),(1,0))"), Err(GammaError::InvalidPolygon(_))));
        assert!(matches!(parse_set("(0,1) u {(1,1)}"), Err(GammaError::DimensionMismatch { .. })));
        assert!(matches!(
            parse_set("polygon((0,0),(2,0),(0,2)) u segment((0,1),(1,1))"),
            Err(GammaError::Overlap(..))
        ));
        // the segment on the open edge x + y = 2 is disjoint from the open triangle
        assert!(parse_set("polygon((0,0),(2,0),(0,2)) u segment((2,0),(0,2))").is_ok());
        assert!(parse_set("(inf,1)").is_err());
        assert!(parse_set("(0,1) x (0,1) x (0,1)").is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["(0,1) u {1}", "(-inf,-1/2)", "polygon((0,0),(1,0),(0,1)) u {(3,4)}", "(0,1) x {2}", "segment((0,0),(1/2,1))"] {
            let x = set(s);
            assert_eq!(x.to_string(), s);
            assert_eq!(set(&x.to_string()), x);
        }
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(lattice_points(&set("(0,1)"), 3).unwrap(), vec![vec![Q::new(1, 3)], vec![Q::new(2, 3)]]);
        assert!(lattice_points(&set("(0,1)"), 1).unwrap().is_empty());
        let tri = set("polygon((0,0),(1,0),(0,1))");
        // (1/2, 1/2) lies on the open edge x + y = 1
        assert!(lattice_points(&tri, 2).unwrap().is_empty());
        assert_eq!(lattice_points(&tri, 3).unwrap(), vec![vec![Q::new(1, 3), Q::new(1, 3)]]);
        assert!(matches!(lattice_points(&set("(0,inf)"), 2), Err(GammaError::Unbounded)));
    }

    /// Oracle: scan a grid by hand against the strict inequalities.
    #[test]
    fn lattice_matches_grid_scan() {
        let tri = set("polygon((0,0),(1,0),(0,1))");
        for m in 1..8i128 {
            let mut expect = Vec::new();
            for i in 0..=m {
                for j in 0..=m {
                    if i > 0 && j > 0 && i + j < m {
                        expect.push(vec![Q::new(i, m), Q::new(j, m)]);
                    }
                }
            }
            assert_eq!(lattice_points(&tri, m as u64).unwrap(), expect);
        }
    }

    #[test]
    fn alpha_examples() {
        let unit = set("(0,1)");
        assert_eq!(alpha_tilde(&unit, 3).unwrap(), lp(&[(0, 1), (-2, -1)]));
        assert_eq!(
            alpha_tilde(&unit, 3).unwrap(),
            MotClass::from_lpoly(LPoly::from_terms([(1, 1), (0, -1)]) * LPoly::from_terms([(-1, 1), (-2, 1)]))
        );
        assert!(alpha_tilde(&unit, 1).unwrap().is_zero());
        let id = AffineFunctional::new(vec![1], Q::zero());
        assert_eq!(alpha_m(&set("{1}"), &id, 2).unwrap(), lp(&[(-3, 1), (-4, -1)]));
        // l(1/3) = 1/6 has m l non integral at m = 3
        let half = AffineFunctional::new(vec![0], Q::new(1, 6));
        assert!(alpha_m(&unit, &half, 3).unwrap().is_zero());
    }

    #[test]
    fn alpha_fiber_route() {
        let l = AffineFunctional::new(vec![1, -2], Q::new(1, 2));
        let delta = set("polygon((0,0),(3,0),(0,2)) u segment((3,0),(0,2)) u (0,1) x {3}");
        for m in 1..6 {
            assert_eq!(alpha_by_fibers(&delta, &l, m).unwrap(), alpha_m(&delta, &l, m).unwrap(), "m={m}");
        }
        let l1 = AffineFunctional::new(vec![2], Q::new(-1, 3));
        let d1 = set("[0,2] u (5/2,4)");
        for m in 1..10 {
            assert_eq!(alpha_by_fibers(&d1, &l1, m).unwrap(), alpha_m(&d1, &l1, m).unwrap());
        }
    }

    /// Partial sums over the valuative radii of a disk: the open disk
    /// `(0, N/m]` gives `1 - L^-N` (tending to 1), the closed one
    /// `[0, N/m]` gives `L - L^-N` (tending to `L`).
    #[test]
    fn disk_sanity_sums() {
        for m in 1..5u64 {
            for n in 1..6i64 {
                let top = Q::new(n as i128, m as i128);
                let open = GammaSet::new(1, vec![Piece::interval(Some(Q::zero()), Some(top)).unwrap(), Piece::point(vec![top]).unwrap()]).unwrap();
                let closed = open.union(&GammaSet::new(1, vec![Piece::point(vec![Q::zero()]).unwrap()]).unwrap()).unwrap();
                assert_eq!(alpha_tilde(&open, m).unwrap(), lp(&[(0, 1), (-n, -1)]));
                assert_eq!(alpha_tilde(&closed, m).unwrap(), lp(&[(1, 1), (-n, -1)]));
            }
        }
    }

    #[test]
    fn products_and_fibers() {
        let a = set("(0,1) u {2}");
        let b = set("[0,1)");
        let p = a.product(&b).unwrap();
        assert_eq!(ominimal_chi(&p), ominimal_chi(&a) * ominimal_chi(&b));
        let l = AffineFunctional::new(vec![1, 1], Q::zero());
        let fiber = p.fiber(&l, Q::new(1, 2));
        assert_eq!(ominimal_chi(&fiber), -1 + 1);
    }
}
