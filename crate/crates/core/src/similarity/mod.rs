//! Pair similarity along four axes: BM25 text similarity, intellectual
//! (reference) overlap, author overlap and publication-time distance.

mod bm25;

use std::collections::BTreeSet;

pub use bm25::{
    bm25, build_idf, floored_idf, normalize_bm25, symmetric_bm25, tokenize, Bm25Params,
    Bm25Space, IdfTable, TokenizedText,
};

use crate::matcher::NormalizedName;
use crate::matching::max_bipartite_matching;
use crate::model::{AuthorName, PubDate, Season};

/// Shared references over the shorter reference list. `None` when either
/// list is empty.
pub fn intellectual_overlap<T: Ord>(refs_q: &BTreeSet<T>, refs_d: &BTreeSet<T>) -> Option<f64> {
    if refs_q.is_empty() || refs_d.is_empty() {
        return None;
    }
    // merge-join over the two sorted sets
    let mut shared = 0usize;
    let (mut a, mut b) = (refs_q.iter().peekable(), refs_d.iter().peekable());
    while let (Some(x), Some(y)) = (a.peek(), b.peek()) {
        match x.cmp(y) {
            std::cmp::Ordering::Less => {
                a.next();
            }
            std::cmp::Ordering::Greater => {
                b.next();
            }
            std::cmp::Ordering::Equal => {
                shared += 1;
                a.next();
                b.next();
            }
        }
    }
    Some(shared as f64 / refs_q.len().min(refs_d.len()) as f64)
}

/// How author mentions are paired up for the author overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AuthorMatching {
    /// Walk the shorter list in order, taking the first unused match in the
    /// longer one. Both directions are tried on equal lengths and the larger
    /// count kept, which keeps the measure symmetric.
    #[default]
    Greedy,
    /// Maximum bipartite matching.
    Exact,
}

fn greedy_count(short: &[NormalizedName], long: &[NormalizedName]) -> usize {
    let mut used = vec![false; long.len()];
    let mut count = 0;
    for a in short {
        if let Some(j) = (0..long.len()).find(|&j| !used[j] && a.matches(&long[j])) {
            used[j] = true;
            count += 1;
        }
    }
    count
}

/// Matched authors over the smaller author count, on pre-normalized names.
pub fn author_overlap_normalized(
    q: &[NormalizedName],
    d: &[NormalizedName],
    mode: AuthorMatching,
) -> Option<f64> {
    if q.is_empty() || d.is_empty() {
        return None;
    }
    let matched = match mode {
        AuthorMatching::Exact => max_bipartite_matching(q.len(), d.len(), |i, j| q[i].matches(&d[j])),
        AuthorMatching::Greedy => match q.len().cmp(&d.len()) {
            std::cmp::Ordering::Less => greedy_count(q, d),
            std::cmp::Ordering::Greater => greedy_count(d, q),
            std::cmp::Ordering::Equal => greedy_count(q, d).max(greedy_count(d, q)),
        },
    };
    Some(matched as f64 / q.len().min(d.len()) as f64)
}

pub fn author_overlap(q: &[AuthorName], d: &[AuthorName], mode: AuthorMatching) -> Option<f64> {
    let q: Vec<NormalizedName> = q.iter().map(NormalizedName::from).collect();
    let d: Vec<NormalizedName> = d.iter().map(NormalizedName::from).collect();
    author_overlap_normalized(&q, &d, mode)
}

/// Month of publication, estimated from the season (spring 3, summer 6,
/// autumn 9, winter 12) or set to June when only the year is known.
pub fn impute_month(date: &PubDate) -> u8 {
    match (date.month, date.season) {
        (Some(m), _) => m,
        (None, Some(Season::Spring)) => 3,
        (None, Some(Season::Summer)) => 6,
        (None, Some(Season::Autumn)) => 9,
        (None, Some(Season::Winter)) => 12,
        (None, None) => 6,
    }
}

/// Absolute distance in months between two publication dates.
pub fn time_distance(q: &PubDate, d: &PubDate) -> u32 {
    let months = |p: &PubDate| i64::from(p.year) * 12 + i64::from(impute_month(p));
    (months(q) - months(d)).unsigned_abs() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn name(s: &str, g: &str) -> AuthorName {
        AuthorName::new(s, g).unwrap()
    }

    #[test]
    fn intellectual_overlap_cases() {
        assert_eq!(intellectual_overlap(&set(&["a", "b"]), &set(&["a", "b"])), Some(1.0));
        assert_eq!(intellectual_overlap(&set(&["a", "b"]), &set(&["c"])), Some(0.0));
        assert_eq!(
            intellectual_overlap(&set(&["a", "b", "c"]), &set(&["b", "c", "d", "e"])),
            Some(2.0 / 3.0)
        );
        assert_eq!(intellectual_overlap(&set(&[]), &set(&["a"])), None);
    }

    #[test]
    fn author_overlap_cases() {
        for mode in [AuthorMatching::Greedy, AuthorMatching::Exact] {
            let a = [name("Abrams", "John J.")];
            assert_eq!(author_overlap(&a, &a, mode), Some(1.0));
            assert_eq!(author_overlap(&a, &[name("Lee", "K.")], mode), Some(0.0));
            assert_eq!(
                author_overlap(
                    &[name("Abrams", "John J."), name("Lee", "K.")],
                    &[name("Abrams", "J.")],
                    mode
                ),
                Some(1.0)
            );
            assert_eq!(author_overlap(&[], &a, mode), None);
        }
    }

    #[test]
    fn greedy_can_undercount_exact() {
        let q = [name("Lee", "J."), name("Lee", "John"), name("Park", "S.")];
        let d = [name("Lee", "John"), name("Lee", "J."), name("Kim", "A."), name("Ito", "B.")];
        assert_eq!(author_overlap(&q, &d, AuthorMatching::Exact), Some(2.0 / 3.0));
        assert_eq!(author_overlap(&q, &d, AuthorMatching::Greedy), Some(2.0 / 3.0));
        // "J." takes "Jane" first, so the second "Jane" finds nothing
        let q2 = [name("Lee", "J."), name("Lee", "Jane")];
        let d2 = [name("Lee", "Jane"), name("Lee", "Joe"), name("Kim", "A.")];
        assert_eq!(author_overlap(&q2, &d2, AuthorMatching::Exact), Some(1.0));
        assert_eq!(author_overlap(&q2, &d2, AuthorMatching::Greedy), Some(0.5));
    }

    #[test]
    fn month_imputation() {
        assert_eq!(impute_month(&PubDate::with_month(2012, 11).unwrap()), 11);
        assert_eq!(impute_month(&PubDate::with_season(2012, Season::Spring)), 3);
        assert_eq!(impute_month(&PubDate::with_season(2012, Season::Winter)), 12);
        assert_eq!(impute_month(&PubDate::year(2012)), 6);
    }

    #[test]
    fn time_distances() {
        let m = |y, mo| PubDate::with_month(y, mo).unwrap();
        assert_eq!(time_distance(&m(2012, 3), &m(2012, 3)), 0);
        assert_eq!(time_distance(&m(2010, 1), &m(2012, 7)), 30);
        assert_eq!(
            time_distance(&PubDate::with_season(2011, Season::Summer), &PubDate::year(2011)),
            0
        );
    }

    use proptest::prelude::*;

    fn arb_date() -> impl Strategy<Value = PubDate> {
        let season = prop::sample::select(vec![Season::Spring, Season::Summer, Season::Autumn, Season::Winter]);
        prop_oneof![
            (1950i32..2030).prop_map(PubDate::year),
            (1950i32..2030, 1u8..=12).prop_map(|(y, m)| PubDate::with_month(y, m).unwrap()),
            (1950i32..2030, season).prop_map(|(y, s)| PubDate::with_season(y, s)),
        ]
    }

    fn arb_authors() -> impl Strategy<Value = Vec<AuthorName>> {
        let s = prop::sample::select(vec!["Lee", "Kim", "Abrams"]);
        let g = prop::sample::select(vec!["J.", "John", "Jane", "K.", "J. M.", ""]);
        prop::collection::vec((s, g).prop_map(|(s, g)| name(s, g)), 0..5)
    }

    proptest! {
        #[test]
        fn measures_symmetric_and_bounded(
            a in arb_authors(), b in arb_authors(),
            ra in prop::collection::btree_set(0u8..12, 0..6),
            rb in prop::collection::btree_set(0u8..12, 0..6),
            da in arb_date(), db in arb_date(),
        ) {
            for mode in [AuthorMatching::Greedy, AuthorMatching::Exact] {
                let x = author_overlap(&a, &b, mode);
                prop_assert_eq!(x, author_overlap(&b, &a, mode));
                if let Some(v) = x { prop_assert!((0.0..=1.0).contains(&v)); }
            }
            let o = intellectual_overlap(&ra, &rb);
            prop_assert_eq!(o, intellectual_overlap(&rb, &ra));
            if let Some(v) = o { prop_assert!((0.0..=1.0).contains(&v)); }
            prop_assert_eq!(time_distance(&da, &db), time_distance(&db, &da));
        }

        #[test]
        fn imputation_keeps_known_months(y in 1950i32..2030, m in 1u8..=12) {
            prop_assert_eq!(impute_month(&PubDate::with_month(y, m).unwrap()), m);
        }
    }
}
