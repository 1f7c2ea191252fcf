//! Closed-form top-level scalars, compared entry by entry with the catalog
//! computed from explicit mode actions.

use crate::checks::{Check, Provenance};
use crate::error::Result;
use crate::exact::{int, pow2, rat};
use crate::lattice::{module_catalog, Character, ModuleDescriptor, ModuleId};

use super::structure::r_closed_form;

/// Closed-form `(omega, E, J)` scalars, with `J` on `V_{L + alpha/2}^±` read as
/// `k^2/4 - k/4`.
pub fn closed_form_character(k: u32, id: ModuleId) -> Character {
    let kk = k as i64;
    let (omega, e, j) = match id {
        ModuleId::VlPlus => (int(0), int(0), int(0)),
        ModuleId::VlMinus => (int(1), int(0), int(-6)),
        ModuleId::Coset(r) => {
            let c2 = rat((r * r) as i64, 2 * kk);
            let j = &c2 * &c2 - &c2 / int(2);
            (rat((r * r) as i64, 4 * kk), int(0), j)
        }
        ModuleId::HalfPlus => (rat(kk, 4), int(1), rat(kk * kk - kk, 4)),
        ModuleId::HalfMinus => (rat(kk, 4), int(-1), rat(kk * kk - kk, 4)),
        ModuleId::Twisted { sector, parity } => {
            let s = if sector == 1 { int(1) } else { int(-1) };
            let base = pow2(1 - 2 * kk);
            if parity > 0 {
                (rat(1, 16), s * base, rat(3, 128))
            } else {
                (rat(9, 16), -s * base * int(4 * kk - 1), rat(-45, 128))
            }
        }
    };
    Character { omega, e, j }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub computed: ModuleDescriptor,
    pub closed_form: Character,
}

/// Computed scalars for all `k + 7` modules next to the closed forms.
pub fn scalar_table(k: u32) -> Result<Vec<TableRow>> {
    Ok(module_catalog(k)?
        .into_iter()
        .map(|d| TableRow {
            closed_form: closed_form_character(k, d.id),
            computed: d,
        })
        .collect())
}

/// Entry-wise comparison of the computed table with the closed forms, plus
/// `lambda_J = r(k/4)` on `V_{L + alpha/2}^±`.
pub fn table_checks(k: u32) -> Result<Vec<Check>> {
    let rows = scalar_table(k)?;
    let mut checks = Vec::new();
    for row in &rows {
        let (c, want) = (&row.computed.character, &row.closed_form);
        let id = row.computed.id;
        let j_prov = match id {
            ModuleId::HalfPlus | ModuleId::HalfMinus => Provenance::Derived,
            _ => Provenance::Stated,
        };
        checks.push(Check::equal(format!("{id} omega"), &want.omega, &c.omega, Provenance::Stated));
        checks.push(Check::equal(format!("{id} E"), &want.e, &c.e, Provenance::Stated));
        checks.push(Check::equal(format!("{id} J"), &want.j, &c.j, j_prov));
        checks.push(Check::equal(
            format!("{id} top weight"),
            &row.computed.top_weight,
            &c.omega,
            Provenance::Trivial,
        ));
    }
    let r_at = r_closed_form(k)?.eval(&rat(k as i64, 4));
    for row in rows.iter().filter(|r| {
        matches!(r.computed.id, ModuleId::HalfPlus | ModuleId::HalfMinus)
    }) {
        checks.push(Check::equal(
            format!("{} J = r(k/4)", row.computed.id),
            &r_at,
            &row.computed.character.j,
            Provenance::Derived,
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::all_pass;

    #[test]
    fn table_matches_closed_forms() {
        for k in [2, 3, 4, 5] {
            let checks = table_checks(k).unwrap();
            assert_eq!(checks.len(), 4 * (k as usize + 7) + 2);
            assert!(all_pass(&checks), "{checks:#?}");
        }
    }

    #[test]
    fn closed_form_spot_values() {
        let t1m = closed_form_character(2, ModuleId::Twisted { sector: 1, parity: -1 });
        assert_eq!(t1m.e, rat(-7, 8));
        assert_eq!(closed_form_character(4, ModuleId::Coset(2)).j, int(0));
    }
}
