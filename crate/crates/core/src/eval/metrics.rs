use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::corpus::Gender;
use crate::error::{Error, Result};
use crate::eval::challenge::{ChallengeItem, Stereotype};
use crate::eval::extract::GenderPrediction;

fn pred_col(p: Option<Gender>) -> usize {
    match p {
        Some(Gender::Masc) => 0,
        Some(Gender::Fem) => 1,
        None => 2,
    }
}

fn gold_row(g: Gender) -> usize {
    match g {
        Gender::Masc => 0,
        Gender::Fem => 1,
    }
}

/// Item counts by gold gender (rows: male, female) and predicted gender
/// (columns: male, female, unknown).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub counts: [[usize; 3]; 2],
}

impl Confusion {
    pub fn get(&self, gold: Gender, predicted: Option<Gender>) -> usize {
        self.counts[gold_row(gold)][pred_col(predicted)]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    fn add(&mut self, gold: Gender, predicted: Option<Gender>) {
        self.counts[gold_row(gold)][pred_col(predicted)] += 1;
    }

    /// F1 of one gender as a percentage; 0 when undefined.
    fn f1(&self, g: Gender) -> f64 {
        let correct = self.get(g, Some(g)) as f64;
        let predicted = (self.get(Gender::Masc, Some(g)) + self.get(Gender::Fem, Some(g))) as f64;
        let gold = self.counts[gold_row(g)].iter().sum::<usize>() as f64;
        if predicted == 0.0 || gold == 0.0 || correct == 0.0 {
            return 0.0;
        }
        let (p, r) = (correct / predicted, correct / gold);
        100.0 * 2.0 * p * r / (p + r)
    }
}

#[derive(serde::Serialize)]
struct Counts {
    male: usize,
    female: usize,
    unknown: usize,
}

#[derive(serde::Serialize)]
struct Subsets {
    pro: usize,
    anti: usize,
    neither: usize,
}

impl Serialize for Confusion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let row = |r: &[usize; 3]| Counts {
            male: r[0],
            female: r[1],
            unknown: r[2],
        };
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("male", &row(&self.counts[0]))?;
        m.serialize_entry("female", &row(&self.counts[1]))?;
        m.end()
    }
}

/// Percentages over a challenge set. Unknown predictions count as wrong
/// for the accuracies and as no prediction for F1.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub items: usize,
    pub acc: f64,
    /// Accuracy on pro-stereotypical items (0 if there are none).
    pub pro: f64,
    pub anti: f64,
    pub delta_s: f64,
    pub f1_male: f64,
    pub f1_female: f64,
    pub delta_g: f64,
    pub n_pro: usize,
    pub n_anti: usize,
    pub n_neither: usize,
    pub confusion: Confusion,
}

fn pct(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

pub fn compute_metrics(
    items: &[ChallengeItem],
    predictions: &[Option<Gender>],
) -> Result<MetricsReport> {
    if items.len() != predictions.len() {
        return Err(Error::Contract(format!(
            "{} challenge items but {} predictions",
            items.len(),
            predictions.len()
        )));
    }
    let mut confusion = Confusion::default();
    let mut right = [0usize; 3];
    let mut total = [0usize; 3];
    for (item, &pred) in items.iter().zip(predictions) {
        confusion.add(item.gold, pred);
        let k = item.stereotype as usize;
        total[k] += 1;
        right[k] += usize::from(pred == Some(item.gold));
    }
    let (pro, anti) = (
        pct(
            right[Stereotype::Pro as usize],
            total[Stereotype::Pro as usize],
        ),
        pct(
            right[Stereotype::Anti as usize],
            total[Stereotype::Anti as usize],
        ),
    );
    let (f1_male, f1_female) = (confusion.f1(Gender::Masc), confusion.f1(Gender::Fem));
    Ok(MetricsReport {
        items: items.len(),
        acc: pct(right.iter().sum(), items.len()),
        pro,
        anti,
        delta_s: pro - anti,
        f1_male,
        f1_female,
        delta_g: f1_male - f1_female,
        n_pro: total[Stereotype::Pro as usize],
        n_anti: total[Stereotype::Anti as usize],
        n_neither: total[Stereotype::Neither as usize],
        confusion,
    })
}

fn one_decimal(x: f64) -> f64 {
    let r = (x * 10.0).round() / 10.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// The seven scores in display order, optionally rounded.
struct Scores<'a>(&'a MetricsReport, bool);

impl Serialize for Scores<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let Scores(r, round) = *self;
        let mut m = s.serialize_map(Some(7))?;
        for (k, v) in [
            ("acc", r.acc),
            ("pro", r.pro),
            ("anti", r.anti),
            ("delta_s", r.delta_s),
            ("f1_male", r.f1_male),
            ("f1_female", r.f1_female),
            ("delta_g", r.delta_g),
        ] {
            m.serialize_entry(k, &if round { one_decimal(v) } else { v })?;
        }
        m.end()
    }
}

impl MetricsReport {
    /// Pretty JSON with a fixed key order: one-decimal scores first, then
    /// counts, then the unrounded scores under `raw`.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

impl Serialize for MetricsReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("items", &self.items)?;
        m.serialize_entry("scores", &Scores(self, true))?;
        m.serialize_entry(
            "subsets",
            &Subsets {
                pro: self.n_pro,
                anti: self.n_anti,
                neither: self.n_neither,
            },
        )?;
        m.serialize_entry("confusion", &self.confusion)?;
        m.serialize_entry("raw", &Scores(self, false))?;
        m.end()
    }
}

fn label(g: Option<Gender>) -> &'static str {
    match g {
        Some(Gender::Masc) => "male",
        Some(Gender::Fem) => "female",
        None => "unknown",
    }
}

/// One line per item: position, stereotype, gold, predicted, matched form,
/// correctness and the entity.
pub fn audit_tsv(items: &[ChallengeItem], predictions: &[GenderPrediction]) -> String {
    let mut out =
        String::from("item\tstereotype\tgold\tpredicted\tmatched_form\tcorrect\tentity\n");
    for (i, (item, p)) in items.iter().zip(predictions).enumerate() {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            i + 1,
            item.stereotype,
            label(Some(item.gold)),
            label(p.predicted),
            p.matched_form.as_deref().unwrap_or("_"),
            u8::from(p.predicted == Some(item.gold)),
            item.entity_word
        ));
    }
    out
}
