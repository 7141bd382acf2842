//! Stand-alone checker for construction bundles and transversality
//! certificates.
//!
//! Works on raw JSON only and deliberately re-implements everything it
//! needs: rational parsing, sign words, the closed form of `f`, and rank via
//! fraction-free (Bareiss) elimination over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

type R = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub pieces: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn rat(v: &Value) -> Result<R, String> {
    let s = v.as_str().ok_or_else(|| format!("expected a rational string, got {v}"))?;
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(R::new(n, d))
}

fn vector(v: &Value) -> Result<Vec<R>, String> {
    v.as_array().ok_or("expected an array")?.iter().map(rat).collect()
}

fn matrix(v: &Value) -> Result<Vec<Vec<R>>, String> {
    v.as_array().ok_or("expected an array of rows")?.iter().map(vector).collect()
}

fn uint(v: &Value, what: &str) -> Result<usize, String> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| format!("missing {what}"))
}

fn signs(s: &str) -> Result<Vec<i64>, String> {
    s.chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            _ => Err(format!("bad sign word {s:?}")),
        })
        .collect()
}

/// `f([m, x]) = Σ_i 2^{−i} s_i`.
fn f_closed(word: &[Vec<i64>], dim: usize) -> Vec<R> {
    let mut out = vec![R::zero(); dim];
    let mut w = R::one();
    for s in word {
        w /= R::from_integer(2.into());
        for (o, &si) in out.iter_mut().zip(s) {
            *o += &w * R::from_integer(si.into());
        }
    }
    out
}

fn dist(a: &[R], b: &[R]) -> R {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(R::zero(), |m, v| if v > m { v } else { m })
}

fn minus(a: &[R], b: &[R]) -> Vec<R> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Rank by Bareiss elimination on integer-scaled rows.
pub fn bareiss_rank(rows: &[Vec<R>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            for j in c + 1..cols {
                let v = (&m[rank][c] * &m[i][j] - &m[i][c] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

struct Piece {
    word: Vec<Vec<i64>>,
    text: String,
    parent: Option<usize>,
    cols: Vec<Vec<R>>,
    offset: Vec<R>,
    endpoint: Vec<R>,
    target: Vec<R>,
}

fn parse_piece(v: &Value, dim: usize, n: usize) -> Result<Piece, String> {
    let word_raw = v["word"].as_array().ok_or("piece without word")?;
    let text: Vec<&str> = word_raw.iter().map(|w| w.as_str().unwrap_or("?")).collect();
    let word = text.iter().map(|w| signs(w)).collect::<Result<Vec<_>, _>>()?;
    if word.is_empty() || word.iter().any(|w| w.len() != dim) {
        return Err(format!("word {text:?} is not a nonempty word over {{±1}}^{dim}"));
    }
    let m = matrix(&v["matrix"])?;
    if m.len() != dim || m.iter().any(|r| r.len() != n + 1) {
        return Err(format!("matrix of {} is not {dim} × {}", text.join("."), n + 1));
    }
    let cols = (0..=n).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect();
    let parent = match &v["parent"] {
        Value::Null => None,
        p => Some(uint(p, "parent")?),
    };
    Ok(Piece {
        word,
        text: text.join("."),
        parent,
        cols,
        offset: vector(&v["offset"])?,
        endpoint: vector(&v["endpoint"])?,
        target: vector(&v["target"])?,
    })
}

/// Every sign word of length `dim` in lexicographic order (− before +).
fn all_letters(dim: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                [-1, 1].into_iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
    }
    out
}

/// Independent re-check of a serialized construction bundle.
pub fn verify_bundle(bundle: &Value) -> VerifyReport {
    let mut failures = Vec::new();
    let mut checks = 0usize;
    let fail = |failures: &mut Vec<String>, msg: String| failures.push(msg);

    let header = (|| -> Result<(usize, usize, usize), String> {
        Ok((uint(&bundle["n"], "n")?, uint(&bundle["dim"], "dim")?, uint(&bundle["depth"], "depth")?))
    })();
    let (n, dim, depth) = match header {
        Ok(h) => h,
        Err(e) => {
            return VerifyReport {
                pieces: 0,
                checks: 1,
                failures: vec![e],
            }
        }
    };
    checks += 1;
    if dim != 2 * n + 3 {
        fail(&mut failures, format!("ambient dimension {dim} is not 2n + 3 for n = {n}"));
    }
    let g0 = match matrix(&bundle["g0"]) {
        Ok(g) if g.len() == dim && g.iter().all(|r| r.len() == n) => g,
        Ok(_) => {
            return VerifyReport {
                pieces: 0,
                checks,
                failures: vec![format!("g0 is not {dim} × {n}")],
            }
        }
        Err(e) => {
            return VerifyReport {
                pieces: 0,
                checks,
                failures: vec![e],
            }
        }
    };
    let g0_cols: Vec<Vec<R>> = (0..n).map(|j| g0.iter().map(|r| r[j].clone()).collect()).collect();
    checks += 1;
    if bareiss_rank(&g0_cols) != n {
        fail(&mut failures, "g0 is not injective".into());
    }

    let raw = bundle["pieces"].as_array().cloned().unwrap_or_default();
    let mut pieces = Vec::with_capacity(raw.len());
    for (i, p) in raw.iter().enumerate() {
        match parse_piece(p, dim, n) {
            Ok(p) => pieces.push(p),
            Err(e) => {
                failures.push(format!("piece {i}: {e}"));
                return VerifyReport {
                    pieces: raw.len(),
                    checks,
                    failures,
                };
            }
        }
    }

    // tree shape: all words of each length, level by level, lexicographic
    let letters = all_letters(dim);
    let mut expected: Vec<(Vec<Vec<i64>>, Option<usize>)> = Vec::new();
    let mut frontier: Vec<(Vec<Vec<i64>>, Option<usize>)> = vec![(vec![], None)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (w, idx) in &frontier {
            for s in &letters {
                let mut child = w.clone();
                child.push(s.clone());
                next.push((child.clone(), Some(expected.len())));
                expected.push((child, *idx));
            }
        }
        frontier = next;
    }
    checks += 1;
    if expected.len() != pieces.len() {
        fail(&mut failures, format!("expected {} pieces, found {}", expected.len(), pieces.len()));
    }
    for (i, ((w, parent), p)) in expected.iter().zip(&pieces).enumerate() {
        checks += 1;
        if *w != p.word || *parent != p.parent {
            fail(&mut failures, format!("piece {i} ({}) is out of place in the tree", p.text));
        }
    }

    let zero = vec![R::zero(); dim];
    let half = R::new(1.into(), 2.into());
    // K list: g0 first, then pieces in order
    let ks: Vec<(Vec<R>, Vec<Vec<R>>)> = std::iter::once((zero.clone(), g0_cols.clone()))
        .chain(pieces.iter().map(|p| (p.offset.clone(), p.cols.clone())))
        .collect();

    let per_piece: Vec<(usize, Vec<String>)> = pieces
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut f = Vec::new();
            let mut c = 0;
            let d = p.word.len();
            let name = &p.text;
            let (xi, lam) = p.cols.split_at(n);
            let lam = &lam[0];

            c += 1;
            if xi != g0_cols.as_slice() {
                f.push(format!("{name}: ξ-columns differ from g0"));
            }
            let (base, parent_word) = match p.parent {
                None => (zero.clone(), vec![]),
                Some(j) if j < i => (pieces[j].endpoint.clone(), pieces[j].word.clone()),
                Some(j) => {
                    f.push(format!("{name}: parent {j} placed later"));
                    return (c, f);
                }
            };
            c += 1;
            if p.offset != base {
                f.push(format!("{name}: base face does not match the parent endpoint"));
            }
            c += 1;
            let tip: Vec<R> = p.offset.iter().zip(lam).map(|(o, l)| o + l).collect();
            if tip != p.endpoint {
                f.push(format!("{name}: endpoint is not offset + λ-column"));
            }
            let fx = f_closed(&p.word, dim);
            c += 1;
            if fx != p.target {
                f.push(format!("{name}: recorded target differs from f"));
            }
            let bound = (0..d + 2).fold(R::one(), |acc, _| acc * &half);
            c += 1;
            if dist(&p.endpoint, &fx) >= bound {
                f.push(format!("{name}: endpoint estimate fails"));
            }
            let bound_a = &bound * R::from_integer(2.into());
            c += 1;
            if dist(&p.offset, &f_closed(&parent_word, dim)) >= bound_a || dist(&p.endpoint, &fx) >= bound_a {
                f.push(format!("{name}: endpoint estimate at level {} fails", d - 1));
            }
            c += 1;
            if bareiss_rank(&p.cols) != n + 1 {
                f.push(format!("{name}: piece is not injective"));
            }
            let dir = minus(&p.endpoint, &p.offset);
            for (j, (a, dirs)) in ks[..=i].iter().enumerate() {
                let mut v: Vec<Vec<R>> = dirs.clone();
                v.push(minus(&p.offset, a));
                for col in xi {
                    let shifted: Vec<R> = p.offset.iter().zip(col).map(|(o, x)| o + x).collect();
                    v.push(minus(&shifted, a));
                }
                let r0 = bareiss_rank(&v);
                v.push(dir.clone());
                c += 1;
                if bareiss_rank(&v) != r0 + 1 {
                    let against = if j == 0 { "g0".to_string() } else { pieces[j - 1].text.clone() };
                    f.push(format!("{name}: not independent modulo V of {against}"));
                }
            }
            (c, f)
        })
        .collect();
    for (c, f) in per_piece {
        checks += c;
        failures.extend(f);
    }

    // every recorded certificate must claim success
    for cert in bundle["certificates"].as_array().into_iter().flatten() {
        checks += 1;
        if cert["pass"] != Value::Bool(true) {
            failures.push(format!(
                "recorded certificate {} for {} does not pass",
                cert["kind"], cert["subject"]
            ));
        }
    }
    VerifyReport {
        pieces: pieces.len(),
        checks,
        failures,
    }
}

/// Re-derives a self-contained transversality certificate. Returns the
/// recomputed verdict, or an error when the recorded ranks disagree with
/// the data.
pub fn verify_transversal_certificate(cert: &Value) -> Result<bool, String> {
    let w = &cert["witness"];
    let n = uint(&w["n"], "n")?;
    let origin = vector(&w["origin"])?;
    let images = matrix(&w["images"])?;
    let eta = matrix(&w["eta"])?;
    let d = origin.len();
    if images.len() + eta.len() != n || images.iter().chain(&eta).any(|v| v.len() != d) {
        return Ok(false);
    }
    let fixed: Vec<Vec<R>> = images.iter().map(|p| minus(p, &origin)).collect();
    let fresh: Vec<Vec<R>> = eta.iter().map(|p| minus(p, &origin)).collect();
    let all: Vec<Vec<R>> = fixed.iter().chain(&fresh).cloned().collect();
    let inj = bareiss_rank(&all);
    if w["injectivity_rank"].as_u64() != Some(inj as u64) {
        return Err(format!("recorded injectivity rank {} but data gives {inj}", w["injectivity_rank"]));
    }
    let mut ok = inj == n;
    let subspaces = w["subspaces"].as_array().cloned().unwrap_or_default();
    let recorded = w["mod_v"].as_array().cloned().unwrap_or_default();
    if recorded.len() != subspaces.len() {
        return Err("mod-V ranks missing".into());
    }
    for (k, rec) in subspaces.iter().zip(&recorded) {
        let point = vector(&k["point"])?;
        let mut v = matrix(&k["directions"])?;
        v.push(minus(&origin, &point));
        v.extend(images.iter().map(|p| minus(p, &point)));
        let r0 = bareiss_rank(&v);
        v.extend(fresh.iter().cloned());
        let r1 = bareiss_rank(&v);
        if rec["rank_v"].as_u64() != Some(r0 as u64) || rec["rank_with_eta"].as_u64() != Some(r1 as u64) {
            return Err(format!("recorded ranks {rec} but data gives ({r0}, {r1})"));
        }
        ok &= r1 == r0 + fresh.len();
    }
    if cert["pass"].as_bool() != Some(ok) {
        return Err(format!("certificate claims pass = {} but the ranks say {ok}", cert["pass"]));
    }
    Ok(ok)
}
