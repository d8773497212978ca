//! Independent reference implementations. Every joint probability here is
//! built as a product of one-step predictive probabilities, updating plain
//! counts after each draw, so it never touches the Gamma-function forms
//! used by the library.

#![allow(dead_code)]

use std::collections::HashMap;

pub struct Priors {
    pub alpha: f64,
    pub lambda: f64,
    pub beta: f64,
}

pub const DEFAULT: Priors = Priors {
    alpha: 3.0,
    lambda: 4.0,
    beta: 3.0,
};

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

pub fn poisson(len: usize, lambda: f64) -> f64 {
    (len as f64 * lambda.ln() - lambda - ln_factorial(len)).exp()
}

/// H(s): Poisson length times uniform characters.
pub fn base_prob(s: &str, lambda: f64, alphabet_size: usize) -> f64 {
    let len = s.chars().count();
    poisson(len, lambda) * (alphabet_size as f64).powi(-(len as i32))
}

/// Discrete model: CRP predictive (m_x + αH(x)) / (n + α), draw by draw.
pub fn discrete_sequential(values: &[String], p: &Priors, alphabet_size: usize) -> f64 {
    let mut counts: HashMap<&str, f64> = HashMap::new();
    let mut total = 0.0;
    let mut log = 0.0;
    for v in values {
        let m = counts.get(v.as_str()).copied().unwrap_or(0.0);
        let h = base_prob(v, p.lambda, alphabet_size);
        log += ((m + p.alpha * h) / (total + p.alpha)).ln();
        *counts.entry(v).or_default() += 1.0;
        total += 1.0;
    }
    log
}

fn length_factor(lengths: &HashMap<usize, f64>, total: f64, len: usize, p: &Priors) -> f64 {
    let n_len = lengths.get(&len).copied().unwrap_or(0.0);
    (n_len + p.alpha * poisson(len, p.lambda)) / (total + p.alpha)
}

/// Positional model: length CRP, then per-position Dirichlet predictive
/// (c_{j,a} + β) / (n_{≥j} + |A|β), where n_{≥j} counts earlier strings
/// at least j long.
pub fn positional_sequential(values: &[String], p: &Priors, alphabet_size: usize) -> f64 {
    let a = alphabet_size as f64;
    let mut lengths: HashMap<usize, f64> = HashMap::new();
    let mut chars: HashMap<(usize, char), f64> = HashMap::new();
    let mut log = 0.0;
    for (k, v) in values.iter().enumerate() {
        let len = v.chars().count();
        log += length_factor(&lengths, k as f64, len, p).ln();
        for (j, c) in v.chars().enumerate() {
            let reaching = values[..k].iter().filter(|w| w.chars().count() > j).count() as f64;
            let count = chars.get(&(j, c)).copied().unwrap_or(0.0);
            log += ((count + p.beta) / (reaching + a * p.beta)).ln();
        }
        *lengths.entry(len).or_default() += 1.0;
        for (j, c) in v.chars().enumerate() {
            *chars.entry((j, c)).or_default() += 1.0;
        }
    }
    log
}

/// Apositional model: length CRP, then one pooled Dirichlet urn over all
/// characters, updated after every character (including within a string).
pub fn apositional_sequential(values: &[String], p: &Priors, alphabet_size: usize) -> f64 {
    let a = alphabet_size as f64;
    let mut lengths: HashMap<usize, f64> = HashMap::new();
    let mut chars: HashMap<char, f64> = HashMap::new();
    let mut seen = 0.0;
    let mut log = 0.0;
    for (k, v) in values.iter().enumerate() {
        let len = v.chars().count();
        log += length_factor(&lengths, k as f64, len, p).ln();
        for c in v.chars() {
            let count = chars.get(&c).copied().unwrap_or(0.0);
            log += ((count + p.beta) / (seen + a * p.beta)).ln();
            *chars.entry(c).or_default() += 1.0;
            seen += 1.0;
        }
        *lengths.entry(len).or_default() += 1.0;
    }
    log
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Every string over `symbols` with length at most `max_len`.
pub fn all_strings(symbols: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * symbols.len());
        for s in &frontier {
            for &c in symbols {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Brute-force AUC over every positive/negative pair, ties counting half.
pub fn pairwise_auc(positives: &[f64], negatives: &[f64]) -> f64 {
    let mut wins = 0.0;
    for &p in positives {
        for &n in negatives {
            if p > n {
                wins += 1.0;
            } else if p == n {
                wins += 0.5;
            }
        }
    }
    wins / (positives.len() * negatives.len()) as f64
}
