//! Shared test oracles, independent of the library's implementation paths.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).expect("fixture readable")
}

/// Dense eigen oracle: principal eigenvalue from nalgebra's QR-based solver
/// plus the eigenvector from shifted inverse iteration.
///
/// Returns the eigenvector normalized to sum 1 and the principal eigenvalue.
pub fn eigen_oracle(rows: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let n = rows.len();
    let a = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let lambda = a
        .complex_eigenvalues()
        .iter()
        .map(|c| c.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if n == 1 {
        return (vec![1.0], lambda);
    }
    // Inverse iteration with a slightly off-eigenvalue shift.
    let shift = lambda * (1.0 + 1e-9) + 1e-12;
    let shifted = &a - DMatrix::identity(n, n) * shift;
    let lu = shifted.lu();
    let mut v = DVector::from_element(n, 1.0 / n as f64);
    for _ in 0..100 {
        let mut next = lu.solve(&v).expect("shifted matrix is nonsingular");
        let norm = next.amax();
        next /= norm;
        if next[0] < 0.0 {
            next = -next;
        }
        let delta = (&next - &v).amax();
        v = next;
        if delta < 1e-14 {
            break;
        }
    }
    let sum: f64 = v.iter().sum();
    (v.iter().map(|x| x / sum).collect(), lambda)
}

/// Consistency ratio from the eigen oracle and the Saaty RI table.
pub fn cr_oracle(rows: &[Vec<f64>]) -> f64 {
    const RI: [f64; 10] = [0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49];
    let n = rows.len();
    if n <= 2 {
        return 0.0;
    }
    let (_, lambda) = eigen_oracle(rows);
    (lambda - n as f64) / (n as f64 - 1.0) / RI[n - 1]
}

/// Brute-force BWM LP oracle.
///
/// The program reduces to two free variables: for fixed `(w_best, w_worst)`
/// every remaining weight is confined to an interval whose endpoints are
/// linear in xi, so the minimal feasible xi at a point follows from
/// bisection with an exact interval-sum feasibility check. The objective is
/// convex over the `(w_best, w_worst)` triangle, and nested grid refinement
/// converges to the global minimum.
pub fn bwm_xi_oracle(bo: &[f64], ow: &[f64], best: usize, worst: usize) -> f64 {
    let n = bo.len();
    assert!(n >= 3, "oracle supports n >= 3");
    let middles: Vec<usize> = (0..n).filter(|&j| j != best && j != worst).collect();
    let gamma = bo[worst];
    let delta = ow[best];

    let feasible = |wb: f64, ww: f64, xi: f64| -> bool {
        if wb < 0.0 || ww < 0.0 {
            return false;
        }
        if (wb - gamma * ww).abs() > xi || (wb - delta * ww).abs() > xi {
            return false;
        }
        let remaining = 1.0 - wb - ww;
        let mut lo_sum = 0.0;
        let mut hi_sum = 0.0;
        for &j in &middles {
            let lo = ((wb - xi) / bo[j]).max(ow[j] * ww - xi).max(0.0);
            let hi = ((wb + xi) / bo[j]).min(ow[j] * ww + xi);
            if lo > hi + 1e-15 {
                return false;
            }
            lo_sum += lo;
            hi_sum += hi;
        }
        lo_sum <= remaining + 1e-15 && remaining <= hi_sum + 1e-15
    };

    // Minimal feasible xi at a point, or infinity.
    let g = |wb: f64, ww: f64| -> f64 {
        let mut hi = 4.0;
        let mut grew = 0;
        while !feasible(wb, ww, hi) {
            hi *= 2.0;
            grew += 1;
            if grew > 6 {
                return f64::INFINITY;
            }
        }
        let mut lo = 0.0;
        for _ in 0..48 {
            let mid = 0.5 * (lo + hi);
            if feasible(wb, ww, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };

    let mut best_xi = f64::INFINITY;
    let mut cx = 0.25;
    let mut cy = 0.25;
    // Coarse pass over the whole triangle.
    let coarse = 40;
    for i in 0..=coarse {
        for j in 0..=coarse {
            let wb = i as f64 / coarse as f64;
            let ww = j as f64 / coarse as f64;
            if wb + ww > 1.0 {
                continue;
            }
            let v = g(wb, ww);
            if v < best_xi {
                best_xi = v;
                cx = wb;
                cy = ww;
            }
        }
    }
    // Nested refinement around the incumbent.
    let mut h = 1.0 / coarse as f64;
    for _ in 0..24 {
        let span = 5.0 * h;
        let steps = 10i32;
        let mut improved = (cx, cy);
        for i in -steps..=steps {
            for j in -steps..=steps {
                let wb = cx + i as f64 * span / steps as f64;
                let ww = cy + j as f64 * span / steps as f64;
                if wb < 0.0 || ww < 0.0 || wb + ww > 1.0 {
                    continue;
                }
                let v = g(wb, ww);
                if v < best_xi {
                    best_xi = v;
                    improved = (wb, ww);
                }
            }
        }
        cx = improved.0;
        cy = improved.1;
        h *= 0.5;
    }
    best_xi
}

/// Parsed subset of Graphviz DOT sufficient for the emitted graphs.
#[derive(Debug, Default)]
pub struct DotGraph {
    pub name: String,
    pub nodes: Vec<(String, HashMap<String, String>)>,
    pub edges: Vec<(String, String, HashMap<String, String>)>,
}

impl DotGraph {
    pub fn node_attr(&self, id: &str, key: &str) -> Option<&str> {
        self.nodes
            .iter()
            .find(|(n, _)| n == id)
            .and_then(|(_, attrs)| attrs.get(key))
            .map(String::as_str)
    }

    pub fn edges_from(&self, id: &str) -> Vec<&(String, String, HashMap<String, String>)> {
        self.edges.iter().filter(|(from, _, _)| from == id).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Str(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Eq,
    Comma,
    Arrow,
}

fn tokenize_dot(text: &str) -> Result<Vec<Tok>, String> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '{' => {
                chars.next();
                toks.push(Tok::LBrace);
            }
            '}' => {
                chars.next();
                toks.push(Tok::RBrace);
            }
            '[' => {
                chars.next();
                toks.push(Tok::LBracket);
            }
            ']' => {
                chars.next();
                toks.push(Tok::RBracket);
            }
            ';' => {
                chars.next();
                toks.push(Tok::Semi);
            }
            '=' => {
                chars.next();
                toks.push(Tok::Eq);
            }
            ',' => {
                chars.next();
                toks.push(Tok::Comma);
            }
            '-' => {
                chars.next();
                match chars.next() {
                    Some('>') => toks.push(Tok::Arrow),
                    other => return Err(format!("expected '->', got '-{other:?}'")),
                }
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => match chars.next() {
                            Some(e) => s.push(e),
                            None => return Err("unterminated escape".to_string()),
                        },
                        Some('"') => break,
                        Some(other) => s.push(other),
                        None => return Err("unterminated string".to_string()),
                    }
                }
                toks.push(Tok::Str(s));
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Id(s));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(toks)
}

/// Validate DOT text against a digraph grammar subset and extract nodes,
/// edges, and their attributes.
pub fn check_dot(text: &str) -> Result<DotGraph, String> {
    let toks = tokenize_dot(text)?;
    let mut pos = 0usize;
    let next = |pos: &mut usize| -> Result<Tok, String> {
        let t = toks.get(*pos).cloned().ok_or("unexpected end of input")?;
        *pos += 1;
        Ok(t)
    };
    let peek = |pos: &usize| -> Option<&Tok> { toks.get(*pos) };

    let id_like = |t: Tok| -> Result<String, String> {
        match t {
            Tok::Id(s) | Tok::Str(s) => Ok(s),
            other => Err(format!("expected identifier, got {other:?}")),
        }
    };

    match next(&mut pos)? {
        Tok::Id(kw) if kw == "digraph" => {}
        other => return Err(format!("expected 'digraph', got {other:?}")),
    }
    let name = id_like(next(&mut pos)?)?;
    if next(&mut pos)? != Tok::LBrace {
        return Err("expected '{'".to_string());
    }

    let mut graph = DotGraph {
        name,
        ..DotGraph::default()
    };

    let parse_attrs = |pos: &mut usize| -> Result<HashMap<String, String>, String> {
        let mut attrs = HashMap::new();
        if peek(pos) != Some(&Tok::LBracket) {
            return Ok(attrs);
        }
        *pos += 1;
        loop {
            let key = match next(pos)? {
                Tok::Id(s) => s,
                Tok::RBracket => break,
                other => return Err(format!("expected attribute key, got {other:?}")),
            };
            if next(pos)? != Tok::Eq {
                return Err("expected '=' in attribute".to_string());
            }
            let value = id_like(next(pos)?)?;
            attrs.insert(key, value);
            match next(pos)? {
                Tok::Comma => continue,
                Tok::RBracket => break,
                other => return Err(format!("expected ',' or ']', got {other:?}")),
            }
        }
        Ok(attrs)
    };

    loop {
        match next(&mut pos)? {
            Tok::RBrace => break,
            Tok::LBrace => {
                // rank=same group.
                loop {
                    match next(&mut pos)? {
                        Tok::RBrace => break,
                        Tok::Id(_) | Tok::Str(_) | Tok::Semi | Tok::Eq => continue,
                        other => return Err(format!("unexpected token in group: {other:?}")),
                    }
                }
            }
            Tok::Id(id) if peek(&pos) == Some(&Tok::Eq) => {
                // Graph-level attribute like rankdir=TB;
                pos += 1;
                id_like(next(&mut pos)?)?;
                if next(&mut pos)? != Tok::Semi {
                    return Err(format!("expected ';' after graph attribute {id}"));
                }
            }
            t @ (Tok::Id(_) | Tok::Str(_)) => {
                let source = id_like(t)?;
                if peek(&pos) == Some(&Tok::Arrow) {
                    pos += 1;
                    let target = id_like(next(&mut pos)?)?;
                    let attrs = parse_attrs(&mut pos)?;
                    if next(&mut pos)? != Tok::Semi {
                        return Err("expected ';' after edge".to_string());
                    }
                    graph.edges.push((source, target, attrs));
                } else {
                    let attrs = parse_attrs(&mut pos)?;
                    if next(&mut pos)? != Tok::Semi {
                        return Err("expected ';' after node".to_string());
                    }
                    graph.nodes.push((source, attrs));
                }
            }
            other => return Err(format!("unexpected token {other:?}")),
        }
    }
    if pos != toks.len() {
        return Err("trailing tokens after closing brace".to_string());
    }
    Ok(graph)
}
