//! The strongly s-regular predicate, `m_s`, and descent to terminal forms.

use std::collections::HashMap;

use thiserror::Error;

use crate::arith::{self, valuation};
use crate::enumerate::RepCounter;
use crate::forms::TernaryForm;
use crate::genus::GenusData;
use crate::local::{hecke_weight, split_by_conductor, terminal_condition_at};
use crate::watson::{watson_lambda, WatsonChain, WatsonError, WatsonStep};

pub const DEFAULT_MS_CAP: u64 = 200;
const MAX_DESCENT_STEPS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsrError {
    #[error("no square n² with n ≤ {cap} is represented by {form}")]
    MsNotFound { form: TernaryForm, cap: u64 },
    #[error("λ_{p} does not lower ord_{p}(m_s) of {form} in one or two steps")]
    NoProgress { form: TernaryForm, p: u64 },
    #[error(transparent)]
    Watson(#[from] WatsonError),
}

/// First `n` where `r(n²)` differs from the product formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counterexample {
    pub n: u64,
    pub lhs: u64,
    pub rhs: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsrReport {
    pub form: TernaryForm,
    pub bound: u64,
    pub m_s: Option<u64>,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

/// Memoised `n ↦ r(n², f)`.
pub struct SquareCounts {
    counter: RepCounter,
    cache: HashMap<u64, u64>,
}

impl SquareCounts {
    pub fn new(f: &TernaryForm) -> Self {
        SquareCounts { counter: RepCounter::new(f), cache: HashMap::new() }
    }

    pub fn get(&mut self, n: u64) -> u64 {
        let counter = &self.counter;
        *self.cache.entry(n).or_insert_with(|| counter.count(n * n))
    }
}

/// `m_s(f)`: the least `n ≤ cap` with `r(n², f) > 0`.
pub fn min_square(f: &TernaryForm, cap: u64) -> Option<u64> {
    let counter = RepCounter::new(f);
    (1..=cap).find(|&n| counter.count(n * n) > 0)
}

/// Checks `r(n²) = r(n₁²)·∏_{p | n₂} h_p(D, ord_p n)` for every `n ≤ bound`,
/// stopping at the first failure.
pub fn check_ssr(f: &TernaryForm, bound: u64) -> SsrReport {
    let d = f.discriminant4();
    let mut squares = SquareCounts::new(f);
    let mut counterexample = None;
    for n in 1..=bound {
        let split = split_by_conductor(n, d);
        if split.n2 == 1 {
            continue;
        }
        let weight: u128 = split
            .exponents
            .iter()
            .map(|(&p, &e)| hecke_weight(d, p, e).expect("p ∤ 2D"))
            .product();
        let rhs = squares.get(split.n1) as u128 * weight;
        let lhs = squares.get(n);
        if lhs as u128 != rhs {
            counterexample = Some(Counterexample { n, lhs, rhs });
            break;
        }
    }
    let m_s = (1..=DEFAULT_MS_CAP).find(|&n| squares.get(n) > 0);
    SsrReport { form: *f, bound, m_s, passed: counterexample.is_none(), counterexample }
}

/// Every `n ≤ bound` whose square some class of `g` represents is also
/// represented by `f`; on failure returns that `n`.
pub fn verify_square_genus(f: &TernaryForm, g: &GenusData, bound: u64) -> Result<(), u64> {
    let own = RepCounter::new(f);
    let classes: Vec<RepCounter> = g.classes.iter().map(|c| RepCounter::new(&c.form)).collect();
    for n in 1..=bound {
        if own.count(n * n) == 0 && classes.iter().any(|c| c.count(n * n) > 0) {
            return Err(n);
        }
    }
    Ok(())
}

fn is_odd_squarefree(m: u64) -> bool {
    m % 2 == 1 && arith::factorize(m).iter().all(|&(_, e)| e == 1)
}

/// `m_s` odd and squarefree, and `L_p ≅ ⟨Δ_p, p, −p⟩` for each `p | m_s`.
pub fn is_terminal(f: &TernaryForm, cap: u64) -> Result<bool, SsrError> {
    let ms = min_square(f, cap).ok_or(SsrError::MsNotFound { form: *f, cap })?;
    Ok(is_odd_squarefree(ms) && arith::prime_divisors(ms).into_iter().all(|p| terminal_condition_at(f, p)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalReduction {
    pub chain: WatsonChain,
    pub terminal_form: TernaryForm,
    pub n: u64,
    /// `m_s` of the input and after each step.
    pub m_s: Vec<u64>,
}

/// The prime at which `f` (with `m_s = ms`) is not yet terminal, if any.
fn obstruction(f: &TernaryForm, ms: u64) -> Option<u64> {
    if ms % 2 == 0 {
        return Some(2);
    }
    let factors = arith::factorize(ms);
    if let Some(&(p, _)) = factors.iter().find(|&&(_, e)| e > 1) {
        return Some(p);
    }
    factors.into_iter().map(|(p, _)| p).find(|&p| !terminal_condition_at(f, p))
}

/// Greedy descent by `λ_p`, taking one step or, when one step does not lower
/// `ord_p(m_s)`, two.
pub fn reduce_to_terminal(f: &TernaryForm, cap: u64) -> Result<TerminalReduction, SsrError> {
    let ms_of = |g: &TernaryForm| min_square(g, cap).ok_or(SsrError::MsNotFound { form: *g, cap });
    let mut current = *f;
    let mut ms = ms_of(f)?;
    let mut steps: Vec<WatsonStep> = Vec::new();
    let mut history = vec![ms];
    while let Some(p) = obstruction(&current, ms) {
        if steps.len() >= MAX_DESCENT_STEPS {
            return Err(SsrError::NoProgress { form: current, p });
        }
        let before = valuation(ms as i128, p as i128);
        let first = watson_lambda(&current, p)?;
        let ms1 = ms_of(&first.output)?;
        if valuation(ms1 as i128, p as i128) < before {
            current = first.output;
            ms = ms1;
            steps.push(first);
            history.push(ms);
            continue;
        }
        let second = watson_lambda(&first.output, p)?;
        let ms2 = ms_of(&second.output)?;
        if valuation(ms2 as i128, p as i128) >= before {
            return Err(SsrError::NoProgress { form: current, p });
        }
        current = second.output;
        ms = ms2;
        steps.push(first);
        steps.push(second);
        history.push(ms1);
        history.push(ms);
    }
    let n = steps.iter().map(|s| s.p).product();
    Ok(TerminalReduction { chain: WatsonChain { input: *f, steps, n }, terminal_form: current, n, m_s: history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::is_isometric;
    use crate::genus::enumerate_genus;

    fn diag(a: i64, b: i64, c: i64) -> TernaryForm {
        TernaryForm::diagonal(a, b, c).unwrap()
    }

    fn brute_min_square(f: &TernaryForm, cap: i64) -> Option<u64> {
        (1..=cap).find(|&n| {
            let r = n;
            (-r..=r).any(|x| (-r..=r).any(|y| (-r..=r).any(|z| f.eval(&[x, y, z]) == n * n)))
        }).map(|n| n as u64)
    }

    #[test]
    fn min_square_examples() {
        assert_eq!(min_square(&diag(1, 1, 1), 10), Some(1));
        assert_eq!(min_square(&diag(2, 5, 5), 10), Some(5));
        assert_eq!(min_square(&diag(2, 13, 13), 20), Some(13));
        for f in [diag(2, 5, 5), diag(2, 13, 13), diag(3, 3, 5), diag(2, 3, 6)] {
            assert_eq!(min_square(&f, 20), brute_min_square(&f, 20));
        }
        assert_eq!(min_square(&diag(2, 5, 5), 4), None);
    }

    #[test]
    fn check_ssr_examples() {
        let r = check_ssr(&diag(1, 1, 1), 60);
        assert!(r.passed && r.counterexample.is_none());
        assert_eq!(r.m_s, Some(1));

        let k10: TernaryForm = "[1,4,9,4,0,0]".parse().unwrap();
        assert!(check_ssr(&k10, 60).passed);

        let r = check_ssr(&diag(1, 1, 32), 60);
        assert!(!r.passed);
        let w = r.counterexample.unwrap();
        assert_ne!(w.lhs as u128, w.rhs);

        let r = check_ssr(&diag(2, 5, 5), 40);
        assert!(r.passed);
        assert_eq!(r.m_s, Some(5));
    }

    #[test]
    fn squares_are_multiples_of_ms() {
        for f in [diag(2, 5, 5), diag(1, 1, 1), diag(2, 13, 13)] {
            let ms = min_square(&f, 50).unwrap();
            let c = RepCounter::new(&f);
            for n in 1..=40 {
                if c.count(n * n) > 0 {
                    assert_eq!(n % ms, 0, "{f} n={n}");
                }
            }
        }
    }

    #[test]
    fn square_genus_examples() {
        let f = diag(1, 1, 1);
        assert!(verify_square_genus(&f, &enumerate_genus(&f).unwrap(), 40).is_ok());
        let s1: TernaryForm = "[1,2,4,2,1,0]".parse().unwrap();
        assert!(verify_square_genus(&s1, &enumerate_genus(&s1).unwrap(), 40).is_ok());
    }

    #[test]
    fn terminal_examples() {
        assert!(is_terminal(&diag(2, 5, 5), DEFAULT_MS_CAP).unwrap());
        assert!(is_terminal(&diag(1, 1, 1), DEFAULT_MS_CAP).unwrap());
        assert!(!is_terminal(&diag(2, 125, 125), DEFAULT_MS_CAP).unwrap());
        assert!(matches!(is_terminal(&diag(2, 5, 5), 3), Err(SsrError::MsNotFound { .. })));
    }

    #[test]
    fn reduce_examples() {
        let t = reduce_to_terminal(&diag(2, 5, 5), DEFAULT_MS_CAP).unwrap();
        assert_eq!(t.n, 1);
        assert_eq!(t.terminal_form, diag(2, 5, 5));

        let t = reduce_to_terminal(&diag(2, 125, 125), DEFAULT_MS_CAP).unwrap();
        assert_eq!(t.m_s, vec![25, 5]);
        assert_eq!(t.n, 5);
        assert!(is_isometric(&t.terminal_form, &diag(2, 5, 5)).is_some());
        assert!(is_terminal(&t.terminal_form, DEFAULT_MS_CAP).unwrap());
    }

    #[test]
    fn single_steps_divide_ms_by_p() {
        let t = reduce_to_terminal(&diag(2, 125, 125), DEFAULT_MS_CAP).unwrap();
        for (i, s) in t.chain.steps.iter().enumerate() {
            assert_eq!(t.m_s[i], s.p * t.m_s[i + 1]);
        }
    }

    #[test]
    fn ms_three_class_number_one_descends() {
        let mut found = None;
        'scan: for a in 1..=6 {
            for b in a..=12 {
                for c in b..=24 {
                    let Ok(f) = TernaryForm::diagonal(a, b, c) else { continue };
                    if min_square(&f, 10) != Some(3) {
                        continue;
                    }
                    if enumerate_genus(&f).unwrap().class_number() == 1 {
                        found = Some(f);
                        break 'scan;
                    }
                }
            }
        }
        let f = found.expect("an m_s = 3 form of class number one");
        let t = reduce_to_terminal(&f, DEFAULT_MS_CAP).unwrap();
        assert!(is_terminal(&t.terminal_form, DEFAULT_MS_CAP).unwrap());
        let ms_end = min_square(&t.terminal_form, DEFAULT_MS_CAP).unwrap();
        assert_eq!(*t.m_s.last().unwrap(), ms_end);
        assert!(t.chain.steps.iter().all(|s| s.p == 3));
    }
}
