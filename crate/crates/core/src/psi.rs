//! Exact psi-class intersection numbers `<tau_{d_1} ... tau_{d_n}>_g` on the
//! moduli space of stable curves.
//!
//! Computed by the Virasoro/DVV recursion seeded with `<tau_0^3>_0 = 1` and
//! `<tau_1>_1 = 1/24`, with string and dilaton shortcuts. Values are memoized
//! on the canonical key `(g, sorted ds)` in a process-global table that can
//! be persisted as a sorted text file of exact rationals.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::combin::double_factorial_odd;
use crate::error::{Error, Result};
use crate::field::{rat_from_str, rat_i64, rat_int, rat_to_string, Rat};

/// A stable bracket index: genus plus the multiset of descendant exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TauIndex {
    pub g: u32,
    pub ds: Vec<u32>,
}

impl TauIndex {
    /// Canonicalizes the exponents (sorted descending). Errors when
    /// `2g - 2 + n <= 0`.
    pub fn new(g: u32, ds: &[u32]) -> Result<Self> {
        let n = ds.len();
        if 2 * (g as i64) - 2 + n as i64 <= 0 {
            return Err(Error::Unstable { g, n });
        }
        let mut ds = ds.to_vec();
        ds.sort_unstable_by(|a, b| b.cmp(a));
        Ok(TauIndex { g, ds })
    }

    pub fn dimension_matches(&self) -> bool {
        let sum: i64 = self.ds.iter().map(|&d| d as i64).sum();
        sum == 3 * (self.g as i64) - 3 + self.ds.len() as i64
    }
}

fn memo() -> &'static Mutex<HashMap<(u32, Vec<u32>), Rat>> {
    static MEMO: OnceLock<Mutex<HashMap<(u32, Vec<u32>), Rat>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `<tau_{d_1} ... tau_{d_n}>_g`, exactly. Zero whenever the dimension
/// constraint `sum d_i = 3g - 3 + n` fails.
pub fn intersection_number(g: u32, ds: &[u32]) -> Result<Rat> {
    let idx = TauIndex::new(g, ds)?;
    if !idx.dimension_matches() {
        return Ok(Rat::zero());
    }
    Ok(eval(&idx))
}

/// Stable-only lookup used inside the recursion: unstable or
/// dimension-violating brackets contribute zero.
fn bracket(g: i64, ds: &[u32]) -> Rat {
    if g < 0 {
        return Rat::zero();
    }
    match TauIndex::new(g as u32, ds) {
        Ok(idx) => {
            if idx.dimension_matches() {
                eval(&idx)
            } else {
                Rat::zero()
            }
        }
        Err(_) => Rat::zero(),
    }
}

fn eval(idx: &TauIndex) -> Rat {
    let key = (idx.g, idx.ds.clone());
    if let Some(v) = memo().lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = compute(idx);
    memo().lock().unwrap().insert(key, v.clone());
    v
}

fn df(m: i64) -> Rat {
    Rat::from_integer(double_factorial_odd(m))
}

fn compute(idx: &TauIndex) -> Rat {
    let g = idx.g;
    let ds = &idx.ds;
    let n = ds.len();

    if g == 0 && ds == &[0, 0, 0] {
        return Rat::one();
    }
    if g == 1 && ds == &[1] {
        return rat_i64(1, 24);
    }

    // String shortcut: some exponent is zero and the reduced index is stable.
    if ds.last() == Some(&0) && !(g == 0 && n == 3) {
        let rest = &ds[..n - 1];
        let mut acc = Rat::zero();
        for j in 0..rest.len() {
            if rest[j] == 0 {
                continue;
            }
            let mut lowered = rest.to_vec();
            lowered[j] -= 1;
            acc += bracket(g as i64, &lowered);
        }
        return acc;
    }

    // Dilaton shortcut.
    if ds.last() == Some(&1) && n >= 2 {
        let rest = &ds[..n - 1];
        let factor = rat_int(2 * g as i64 - 2 + rest.len() as i64);
        return factor * bracket(g as i64, rest);
    }

    // DVV step on the largest exponent, which is >= 2 here.
    let k = (ds[0] - 1) as i64;
    let rest = &ds[1..];
    let mut acc = Rat::zero();
    for j in 0..rest.len() {
        let dj = rest[j] as i64;
        let mut merged = rest.to_vec();
        merged[j] = (k + dj) as u32;
        acc += df(2 * (k + dj) + 1) / df(2 * dj - 1) * bracket(g as i64, &merged);
    }
    let half = rat_i64(1, 2);
    for a in 0..=(k - 1).max(-1) {
        let b = k - 1 - a;
        if b < 0 {
            continue;
        }
        let w = df(2 * a + 1) * df(2 * b + 1);
        // genus reduction
        let mut lower = rest.to_vec();
        lower.push(a as u32);
        lower.push(b as u32);
        acc += &half * &w * bracket(g as i64 - 1, &lower);
        // stable splittings, ordered: (a, I, g1) vs (b, complement, g - g1)
        for g1 in 0..=g as i64 {
            for mask in 0u32..(1 << rest.len()) {
                let mut left = vec![a as u32];
                let mut right = vec![b as u32];
                for (j, d) in rest.iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        left.push(*d);
                    } else {
                        right.push(*d);
                    }
                }
                let l = bracket(g1, &left);
                if l.is_zero() {
                    continue;
                }
                acc += &half * &w * l * bracket(g as i64 - g1, &right);
            }
        }
    }
    acc / df(2 * k + 3)
}

/// Persist the memo table: one line per entry, `g d1 d2 ... : p/q`,
/// sorted for reproducible diffs.
pub fn cache_save(path: &Path) -> Result<()> {
    let mut rows: Vec<((u32, Vec<u32>), Rat)> = memo()
        .lock()
        .unwrap()
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    rows.sort();
    let mut out = String::new();
    for ((g, ds), v) in rows {
        write!(out, "{g}").unwrap();
        for d in ds {
            write!(out, " {d}").unwrap();
        }
        writeln!(out, " : {}", rat_to_string(&v)).unwrap();
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Restore a memo table written by [`cache_save`]; loaded values round-trip
/// exactly. An empty file yields an empty table.
pub fn cache_load(path: &Path) -> Result<usize> {
    let text = std::fs::read_to_string(path)?;
    let mut loaded = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (head, val) = line
            .split_once(':')
            .ok_or_else(|| Error::Format(format!("line {}: missing ':'", lineno + 1)))?;
        let mut parts = head.split_whitespace();
        let g: u32 = parts
            .next()
            .ok_or_else(|| Error::Format(format!("line {}: empty key", lineno + 1)))?
            .parse()
            .map_err(|_| Error::Format(format!("line {}: bad genus", lineno + 1)))?;
        let ds: Vec<u32> = parts
            .map(|p| {
                p.parse()
                    .map_err(|_| Error::Format(format!("line {}: bad exponent", lineno + 1)))
            })
            .collect::<Result<_>>()?;
        let v = rat_from_str(val).map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))?;
        memo().lock().unwrap().insert((g, ds), v);
        loaded += 1;
    }
    Ok(loaded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::factorial;
    use rand::{Rng, SeedableRng};

    fn val(g: u32, ds: &[u32]) -> Rat {
        intersection_number(g, ds).unwrap()
    }

    #[test]
    fn forced_small_values() {
        assert_eq!(val(0, &[0, 0, 0]), rat_int(1));
        assert_eq!(val(1, &[1]), rat_i64(1, 24));
        assert_eq!(val(0, &[1, 0, 0, 0]), rat_int(1));
        assert_eq!(val(2, &[0]), Rat::zero()); // dimension mismatch
    }

    #[test]
    fn known_values() {
        assert_eq!(val(0, &[2, 0, 0, 0, 0]), rat_int(1));
        assert_eq!(val(0, &[1, 1, 0, 0, 0]), rat_int(2));
        assert_eq!(val(1, &[0, 2]), rat_i64(1, 24));
        assert_eq!(val(1, &[1, 1]), rat_i64(1, 24));
        assert_eq!(val(1, &[0, 0, 3]), rat_i64(1, 24));
        assert_eq!(val(1, &[0, 1, 2]), rat_i64(1, 12));
        assert_eq!(val(1, &[1, 1, 1]), rat_i64(1, 12));
        assert_eq!(val(2, &[4]), rat_i64(1, 1152));
        assert_eq!(val(2, &[0, 5]), rat_i64(1, 1152));
        assert_eq!(val(2, &[3, 2]), rat_i64(29, 5760));
    }

    #[test]
    fn genus_zero_closed_form() {
        // <tau_{d_1}...tau_{d_n}>_0 = (n-3)! / prod d_j!
        let cases: &[&[u32]] = &[
            &[3, 0, 0, 0, 0, 0],
            &[2, 1, 0, 0, 0, 0],
            &[1, 1, 1, 0, 0, 0],
            &[2, 2, 0, 0, 0, 0, 0],
        ];
        for ds in cases {
            let n = ds.len() as u64;
            let mut denom = Rat::one();
            for &d in ds.iter() {
                denom *= Rat::from_integer(factorial(d as u64));
            }
            let expect = Rat::from_integer(factorial(n - 3)) / denom;
            assert_eq!(val(0, ds), expect, "ds = {ds:?}");
        }
    }

    #[test]
    fn string_and_dilaton_on_random_indices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let g = rng.gen_range(0u32..=3);
            let n = rng.gen_range(1usize..=4);
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let dim = 3 * g as i64 - 3 + n as i64;
            if dim < 0 {
                continue;
            }
            // random composition of dim into n parts
            let mut ds = vec![0u32; n];
            for _ in 0..dim {
                let j = rng.gen_range(0..n);
                ds[j] += 1;
            }
            let base = val(g, &ds);
            // string
            let mut with0 = ds.clone();
            with0.push(0);
            let mut string_sum = Rat::zero();
            for j in 0..n {
                if ds[j] == 0 {
                    continue;
                }
                let mut lowered = ds.clone();
                lowered[j] -= 1;
                string_sum += val(g, &lowered);
            }
            assert_eq!(val(g, &with0), string_sum, "string at g={g}, ds={ds:?}");
            // dilaton
            let mut with1 = ds.clone();
            with1.push(1);
            let factor = rat_int(2 * g as i64 - 2 + n as i64);
            assert_eq!(val(g, &with1), factor * base, "dilaton at g={g}, ds={ds:?}");
        }
    }

    #[test]
    fn cache_round_trip() {
        let _ = val(1, &[2, 0]);
        let dir = std::env::temp_dir().join("localtr-psi-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.txt");
        cache_save(&path).unwrap();
        let before: HashMap<_, _> = memo().lock().unwrap().clone();
        let loaded = cache_load(&path).unwrap();
        assert_eq!(loaded, before.len());
        assert_eq!(*memo().lock().unwrap(), before);
        // corrupted file fails
        std::fs::write(&path, "1 2 huh").unwrap();
        assert!(cache_load(&path).is_err());
        // empty file loads nothing
        std::fs::write(&path, "").unwrap();
        assert_eq!(cache_load(&path).unwrap(), 0);
    }
}
