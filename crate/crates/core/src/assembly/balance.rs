use std::collections::{BTreeMap, BTreeSet};

use unicode_normalization::UnicodeNormalization;

use crate::assembly::lint::{LintFlag, LintKind};
use crate::corpus::ParallelPair;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct BalancedDataset {
    /// Each kept original directly followed by its counterfactual.
    pub pairs: Vec<ParallelPair>,
    /// One IdenticalCounterfactual flag per excluded original.
    pub identical: Vec<LintFlag>,
    /// Ids of originals that had no counterfactual (generation skipped).
    pub without_counterfactual: Vec<String>,
}

fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Originals are [`GenderedSelection`](crate::selection::GenderedSelection)s
/// or plain pairs. Pairs every original with the counterfactual whose `parent` is its id.
/// Originals whose counterfactual target is NFC-identical to their own are
/// dropped together with it. Originals without a counterfactual are left
/// out so that the output stays balanced.
pub fn build_balanced_dataset<O: AsRef<ParallelPair>>(
    originals: &[O],
    counterfactuals: &[ParallelPair],
) -> Result<BalancedDataset> {
    let ids: BTreeSet<&str> = originals.iter().map(|o| o.as_ref().id.as_str()).collect();
    if ids.len() != originals.len() {
        return Err(Error::Contract("original pair ids are not unique".into()));
    }
    let mut by_parent: BTreeMap<&str, &ParallelPair> = BTreeMap::new();
    for cf in counterfactuals {
        let parent = cf.parent.as_deref().ok_or_else(|| {
            Error::Contract(format!("counterfactual `{}` has no parent id", cf.id))
        })?;
        if !ids.contains(parent) {
            return Err(Error::Contract(format!(
                "counterfactual `{}` names parent `{parent}`, which is not among the originals",
                cf.id
            )));
        }
        if by_parent.insert(parent, cf).is_some() {
            return Err(Error::Contract(format!(
                "original `{parent}` has more than one counterfactual"
            )));
        }
    }

    let mut out = BalancedDataset::default();
    for orig in originals {
        let orig = orig.as_ref();
        let Some(cf) = by_parent.get(orig.id.as_str()) else {
            out.without_counterfactual.push(orig.id.clone());
            continue;
        };
        if nfc(cf.tgt_raw()) == nfc(orig.tgt_raw()) {
            out.identical.push(LintFlag {
                pair_id: cf.id.clone(),
                kind: LintKind::IdenticalCounterfactual,
                detail: format!("target unchanged: {}", cf.tgt_raw()),
            });
            continue;
        }
        out.pairs.push(orig.clone());
        out.pairs.push((*cf).clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Origin;
    use crate::selection::GenderedSelection;

    fn sel(id: &str, tgt: &str) -> GenderedSelection {
        GenderedSelection {
            pair: ParallelPair::from_raw(
                id,
                "The baker sold his bread.",
                tgt,
                "fr",
                Origin::Original,
            ),
            pronoun_index: 4,
            profession_index: 2,
            profession_lemma: "baker".into(),
        }
    }

    fn cf(parent: &str, tgt: &str) -> ParallelPair {
        let mut p = ParallelPair::from_raw(
            format!("{parent}-cf"),
            "The baker sold her bread.",
            tgt,
            "fr",
            Origin::Counterfactual,
        );
        p.parent = Some(parent.into());
        p
    }

    #[test]
    fn pairs_and_exclusions() {
        let originals = [
            sel("a", "Le boulanger a vendu son pain."),
            sel("b", "Chaque boulanger vend."),
            sel("c", "x"),
        ];
        let cfs = [
            cf("a", "La boulangère a vendu son pain."),
            cf("b", "Chaque boulanger vend."),
        ];
        let out = build_balanced_dataset(&originals, &cfs).unwrap();
        let ids: Vec<_> = out.pairs.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["a", "a-cf"]);
        assert_eq!(out.identical.len(), 1);
        assert_eq!(out.identical[0].pair_id, "b-cf");
        assert_eq!(out.without_counterfactual, ["c"]);
    }

    #[test]
    fn identity_is_judged_after_nfc() {
        let originals = [sel("a", "Le caf\u{e9}.")];
        let cfs = [cf("a", "Le cafe\u{301}.")];
        let out = build_balanced_dataset(&originals, &cfs).unwrap();
        assert!(out.pairs.is_empty());
        assert_eq!(out.identical.len(), 1);
    }

    #[test]
    fn orphan_counterfactual_is_contract_error() {
        let err = build_balanced_dataset(&[sel("a", "x")], &[cf("zz", "y")]).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
        let err =
            build_balanced_dataset(&[sel("a", "x")], &[cf("a", "y"), cf("a", "z")]).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }
}
