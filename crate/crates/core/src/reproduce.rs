//! Recomputes the published Stanley depth values for the path and cycle
//! families and compares each against its reference value.

use serde::Serialize;

use crate::bounds::{cycle_beta_closed, sdepth_cycle_mod_line, sdepth_line_quotient};
use crate::engine::{alpha_test, sdepth_exact, SdepthResult, SearchOptions};
use crate::error::Result;
use crate::monomial::{cycle_ideal, line_ideal};
use crate::poset::{poset_of_ideal_quotient, poset_of_quotient, SubsetPoset};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceRow {
    pub quantity: String,
    pub reference: String,
    pub computed: String,
    pub agree: bool,
    /// Rows that are informational only do not affect [`ReferenceTable::all_agree`].
    pub binding: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReferenceTable {
    pub rows: Vec<ReferenceRow>,
}

impl ReferenceTable {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().filter(|r| r.binding).all(|r| r.agree)
    }
}

fn exact_row(
    quantity: String,
    reference: i64,
    poset: &SubsetPoset,
    options: &SearchOptions,
) -> ReferenceRow {
    let result: SdepthResult = sdepth_exact(poset, None, options);
    let computed = match (result.inconclusive, result.value.finite()) {
        (false, Some(v)) => v.to_string(),
        (true, _) => format!(
            "inconclusive [{}, {}]",
            result.value,
            result.upper_bound.map_or("?".into(), |u| u.to_string())
        ),
        (false, None) => "infinite".into(),
    };
    ReferenceRow {
        agree: computed == reference.to_string(),
        quantity,
        reference: reference.to_string(),
        computed,
        binding: true,
        note: None,
    }
}

/// Builds the full table. The `n = 13` cycle is only included with `include_slow`.
pub fn reference_table(include_slow: bool, options: &SearchOptions) -> Result<ReferenceTable> {
    let mut rows = Vec::new();

    for n in 3..=12 {
        let p = poset_of_quotient(&line_ideal(n)?)?;
        rows.push(exact_row(
            format!("sdepth(S/I_{n})"),
            sdepth_line_quotient(n)?,
            &p,
            options,
        ));
    }
    for n in [3usize, 5, 6, 8, 9, 11, 12] {
        let p = poset_of_quotient(&cycle_ideal(n)?)?;
        let reference = ((n as i64 - 1) + 2) / 3;
        rows.push(exact_row(
            format!("sdepth(S/J_{n})"),
            reference,
            &p,
            options,
        ));
    }
    let mut computed_cycles = vec![(4usize, 1i64), (7, 2), (10, 4)];
    if include_slow {
        computed_cycles.push((13, 5));
    }
    for (n, reference) in computed_cycles {
        let p = poset_of_quotient(&cycle_ideal(n)?)?;
        rows.push(exact_row(
            format!("sdepth(S/J_{n})"),
            reference,
            &p,
            options,
        ));
    }
    for n in 3..=10 {
        let p = poset_of_ideal_quotient(&cycle_ideal(n)?, &line_ideal(n)?)?;
        rows.push(exact_row(
            format!("sdepth(J_{n}/I_{n})"),
            sdepth_cycle_mod_line(n)?,
            &p,
            options,
        ));
    }

    let p7 = poset_of_quotient(&cycle_ideal(7)?)?;
    let beta = p7.level_counts();
    for (t, reference) in [1u64, 7, 14, 7].into_iter().enumerate() {
        rows.push(ReferenceRow {
            quantity: format!("beta(7,{t})"),
            reference: reference.to_string(),
            computed: beta[t].to_string(),
            agree: beta[t] == reference,
            binding: true,
            note: None,
        });
        let closed = cycle_beta_closed(7, t);
        rows.push(ReferenceRow {
            quantity: format!("beta_closed(7,{t})"),
            reference: reference.to_string(),
            computed: closed.to_string(),
            agree: closed == reference as i128,
            binding: true,
            note: None,
        });
    }

    let alpha = alpha_test(&beta, 3)?;
    for (t, reference) in [1i128, 4, 2, -1].into_iter().enumerate() {
        let mut row = ReferenceRow {
            quantity: format!("alpha(7,3,{t})"),
            reference: reference.to_string(),
            computed: alpha.alpha[t].to_string(),
            agree: alpha.alpha[t] == reference,
            binding: true,
            note: None,
        };
        if t == 2 {
            row.binding = false;
            row.note = Some(
                "reference value 2 contradicts the recurrence: 14 - C(3,2)*1 - C(2,1)*4 = 3, \
                 and only 3 is consistent with alpha_3 = -1"
                    .into(),
            );
        }
        rows.push(row);
    }
    rows.push(ReferenceRow {
        quantity: "alpha-test(S/J_7, k=3)".into(),
        reference: "fail".into(),
        computed: if alpha.pass { "pass" } else { "fail" }.into(),
        agree: !alpha.pass,
        binding: true,
        note: None,
    });

    Ok(ReferenceTable { rows })
}
