//! Bounded search for strongly s-regular forms representing one, and the
//! table verification run.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{block_counts, block_tag, TableEntry};
use crate::forms::{is_isometric, minkowski_reduce, TernaryForm};
use crate::genus::enumerate_genus;
use crate::identities::{all_suites, IdentityCheck};
use crate::ssr::{check_ssr, Counterexample};

/// Candidate shapes: `⟨1⟩ ⊥ ℓ` with integral Gram matrix, or `[1,a,b,d,e,f]`
/// with some odd cross term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Integral,
    Half,
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "integral" | "1" => Ok(Scale::Integral),
            "half" | "1/2" => Ok(Scale::Half),
            _ => Err(format!("unknown scale {s:?} (expected integral or half)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    /// Largest diagonal coefficient.
    pub coeff_max: i64,
    /// Largest `D = 4·dL`.
    pub disc_max: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { coeff_max: 81, disc_max: 4800 }
    }
}

/// Every candidate of the given shape within `caps`.
pub fn enumerate_candidates(scale: Scale, caps: SearchCaps) -> Vec<TernaryForm> {
    let mut out = Vec::new();
    let fits = |f: &TernaryForm| f.discriminant4().value() <= caps.disc_max;
    match scale {
        Scale::Integral => {
            // ℓ = [a, 2b, c] with 0 ≤ 2b ≤ a ≤ c
            for a in 1..=caps.coeff_max {
                for m in (0..=a).step_by(2) {
                    for c in a..=caps.coeff_max {
                        if 4 * a * c - m * m > caps.disc_max as i64 {
                            break;
                        }
                        let f = TernaryForm::new(1, a, c, m, 0, 0).unwrap();
                        out.push(f);
                    }
                }
            }
        }
        Scale::Half => {
            for a in 1..=caps.coeff_max {
                for b in a..=caps.coeff_max {
                    for d in 0..=a {
                        for e in -1..=1 {
                            for f in 0..=1 {
                                if (d | e | f) & 1 == 0 {
                                    continue;
                                }
                                if let Ok(form) = TernaryForm::new(1, a, b, d, e, f) {
                                    if fits(&form) {
                                        out.push(form);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Keeps a candidate unless `D` is divisible by every prime that must miss
/// it: `{3,5,7}` for integral scale and `{3,5,7,11}` for half scale.
pub fn prune_by_prime_divisors(f: &TernaryForm) -> bool {
    let d = f.discriminant4().value();
    let m = if f.has_integral_scale() { 105 } else { 1155 };
    d % m != 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub bound: u64,
    pub candidates_examined: usize,
    pub pruned: usize,
    /// Reduced representatives, pairwise non-isometric, sorted by `(D, form)`.
    pub passers: Vec<TernaryForm>,
    pub matched_against_dataset: bool,
    /// Passers absent from the dataset (finite-bound false positives).
    pub false_positives: Vec<TernaryForm>,
    /// Dataset entries in scope that the search did not return.
    pub missing: Vec<TernaryForm>,
}

#[derive(Debug, Clone, Default)]
pub struct SearchFilter {
    pub scale: Option<Scale>,
    pub block: Option<String>,
}

impl SearchFilter {
    fn admits_form(&self, f: &TernaryForm) -> bool {
        let scale = if f.has_integral_scale() { Scale::Integral } else { Scale::Half };
        self.scale.is_none_or(|s| s == scale)
            && self.block.as_deref().is_none_or(|b| block_tag(f.discriminant4()) == Some(b))
    }
}

/// Removes isometric duplicates, keeping reduced representatives sorted by `(D, form)`.
pub fn dedup_by_isometry(forms: Vec<TernaryForm>) -> Vec<TernaryForm> {
    let mut buckets: BTreeMap<(u64, i64, i64, i64), Vec<TernaryForm>> = BTreeMap::new();
    for f in forms {
        let r = minkowski_reduce(&f).0;
        let bucket = buckets.entry((r.discriminant4().value(), r.a(), r.b(), r.c())).or_default();
        if !bucket.iter().any(|g| *g == r || is_isometric(g, &r).is_some()) {
            bucket.push(r);
        }
    }
    let mut out: Vec<TernaryForm> = buckets.into_values().flatten().collect();
    out.sort_by_key(|f| (f.discriminant4().value(), *f));
    out
}

/// Candidates × pruning × `check_ssr(·, bound)`, deduplicated and compared
/// with `dataset`.
pub fn search_representing_one(bound: u64, caps: SearchCaps, filter: &SearchFilter, dataset: &[TableEntry]) -> SearchReport {
    let scales: Vec<Scale> = match filter.scale {
        Some(s) => vec![s],
        None => vec![Scale::Integral, Scale::Half],
    };
    let candidates: Vec<TernaryForm> = scales
        .into_iter()
        .flat_map(|s| enumerate_candidates(s, caps))
        .filter(|f| filter.admits_form(f))
        .collect();
    let kept: Vec<TernaryForm> = candidates.iter().copied().filter(prune_by_prime_divisors).collect();
    // Staged: a cheap low bound first, then the full bound.
    let quick = bound.min(12);
    let hits: Vec<TernaryForm> = kept
        .par_iter()
        .filter(|f| check_ssr(f, quick).passed && check_ssr(f, bound).passed)
        .copied()
        .collect();
    let passers = dedup_by_isometry(hits);

    let in_scope: Vec<&TableEntry> = dataset.iter().filter(|e| filter.admits_form(&e.form)).collect();
    let false_positives: Vec<TernaryForm> = passers
        .iter()
        .filter(|p| !in_scope.iter().any(|e| is_isometric(&e.form, p).is_some()))
        .copied()
        .collect();
    let missing: Vec<TernaryForm> = in_scope
        .iter()
        .filter(|e| !passers.iter().any(|p| is_isometric(&e.form, p).is_some()))
        .map(|e| e.form)
        .collect();
    SearchReport {
        bound,
        candidates_examined: candidates.len(),
        pruned: candidates.len() - kept.len(),
        matched_against_dataset: false_positives.is_empty() && missing.is_empty() && passers.len() == in_scope.len(),
        passers,
        false_positives,
        missing,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryCheck {
    pub form: TernaryForm,
    pub table: u8,
    pub block: String,
    pub mark: Option<String>,
    pub represents_one: bool,
    pub ssr_passed: bool,
    pub counterexample: Option<(u64, u64, u128)>,
    pub expected_class_number: u8,
    pub class_number: Option<usize>,
    /// For `S_i`/`T_i`: whether the partner lies in the computed genus.
    pub partner_in_genus: Option<bool>,
}

impl EntryCheck {
    pub fn passed(&self) -> bool {
        self.represents_one
            && self.ssr_passed
            && self.class_number == Some(self.expected_class_number as usize)
            && self.partner_in_genus != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub bound: u64,
    pub entries: Vec<EntryCheck>,
    pub table1_blocks: Vec<usize>,
    pub table2_blocks: Vec<usize>,
    pub identities: Vec<IdentityCheck>,
}

impl TableReport {
    pub fn failures(&self) -> Vec<&EntryCheck> {
        self.entries.iter().filter(|e| !e.passed()).collect()
    }

    pub fn identity_failures(&self) -> Vec<&IdentityCheck> {
        self.identities.iter().filter(|c| !c.passed()).collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty() && self.identity_failures().is_empty()
    }
}

fn check_entry(entry: &TableEntry, dataset: &[TableEntry], bound: u64) -> EntryCheck {
    let f = entry.form;
    let report = check_ssr(&f, bound);
    let genus = enumerate_genus(&f).ok();
    let partner_in_genus = entry.partner_mark().map(|pm| {
        let partner = dataset.iter().find(|e| e.mark.as_deref() == Some(pm.as_str()));
        match (partner, &genus) {
            (Some(p), Some(g)) => g.class_of(&p.form).is_some(),
            _ => false,
        }
    });
    EntryCheck {
        form: f,
        table: entry.table,
        block: entry.block.clone(),
        mark: entry.mark.clone(),
        represents_one: crate::enumerate::rep_count(&f, 1) > 0,
        ssr_passed: report.passed,
        counterexample: report.counterexample.map(|Counterexample { n, lhs, rhs }| (n, lhs, rhs)),
        expected_class_number: entry.class_number,
        class_number: genus.map(|g| g.class_number()),
        partner_in_genus,
    }
}

/// Re-checks every dataset entry at `bound`, and runs the identity suites.
pub fn verify_tables(dataset: &[TableEntry], bound: u64) -> TableReport {
    let (entries, identities) = rayon::join(
        || dataset.par_iter().map(|e| check_entry(e, dataset, bound)).collect(),
        all_suites,
    );
    TableReport {
        bound,
        entries,
        table1_blocks: block_counts(dataset, 1),
        table2_blocks: block_counts(dataset, 2),
        identities,
    }
}
