//! The `verify` command: re-check a matrix-unit file against a group with
//! nothing but exact group-algebra arithmetic. The checks are written out
//! directly here, independent of the construction code, so the two sides
//! can only agree by computing the same algebra.

use std::path::Path;

use serde::Serialize;
use wedderburn_core::{FiniteGroup, GroupAlgebraElement};

use crate::fail::{CliResult, Failure};
use crate::json::{elem_from_json, MatrixUnitSetJson};
use crate::source::LoadedGroup;

const MAX_REPORTED: usize = 40;

#[derive(Serialize)]
pub struct VerifyReport {
    pub group: String,
    pub n: usize,
    pub checks: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub status: String,
}

struct Recorder {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            checks: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(msg());
            }
        }
    }

    fn finish(mut self) -> (usize, usize, Vec<String>) {
        if self.failed > self.failures.len() {
            self.failures.push(format!(
                "... and {} more failed checks",
                self.failed - self.failures.len()
            ));
        }
        (self.checks, self.failed, self.failures)
    }
}

/// Decodes the file (decode problems are input errors, exit 4) and re-runs
/// every defining relation (failures are verification errors, exit 2).
pub fn run_verify(lg: &LoadedGroup, units_path: &Path, json_output: bool) -> CliResult<()> {
    let group = &lg.group;
    let text = std::fs::read_to_string(units_path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", units_path.display())))?;
    let parsed: MatrixUnitSetJson = serde_json::from_str(&text).map_err(|e| {
        Failure::input(format!(
            "{} is not a valid matrix-unit file: {e}",
            units_path.display()
        ))
    })?;
    if parsed.group.order != group.order() {
        return Err(Failure::input(format!(
            "units file is for a group of order {} ({}), but the given group has order {}",
            parsed.group.order,
            parsed.group.name,
            group.order()
        )));
    }
    let n = parsed.n;
    if n == 0 {
        return Err(Failure::input("matrix-unit file has n = 0"));
    }
    if parsed.units.len() != n || parsed.units.iter().any(|row| row.len() != n) {
        return Err(Failure::input(format!(
            "matrix-unit file does not hold an {n} x {n} grid"
        )));
    }
    let identity = elem_from_json(&parsed.identity, group)
        .map_err(|e| Failure::input(format!("identity element: {e}")))?;
    let mut units: Vec<Vec<GroupAlgebraElement>> = Vec::with_capacity(n);
    for (i, row) in parsed.units.iter().enumerate() {
        let mut decoded = Vec::with_capacity(n);
        for (j, u) in row.iter().enumerate() {
            decoded.push(
                elem_from_json(u, group)
                    .map_err(|e| Failure::input(format!("unit ({i},{j}): {e}")))?,
            );
        }
        units.push(decoded);
    }

    let (checks, failed, failures) = check_relations(group, &identity, &units);
    let report = VerifyReport {
        group: lg.name.clone(),
        n,
        checks,
        failed,
        failures: failures.clone(),
        status: if failed == 0 {
            String::from("passed")
        } else {
            String::from("failed")
        },
    };
    if json_output {
        let mut s =
            serde_json::to_string_pretty(&report).expect("report serialization cannot fail");
        s.push('\n');
        print!("{s}");
    } else if failed == 0 {
        println!(
            "verification passed: {checks} exact checks on the {n} x {n} grid"
        );
    } else {
        for f in &failures {
            println!("FAIL {f}");
        }
        println!("verification FAILED: {failed} of {checks} exact checks failed");
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "{failed} exact check(s) failed"
        )))
    }
}

/// All defining checks: the identity is a nonzero idempotent, no unit is
/// zero, the diagonal sums to the identity, and the full grid satisfies
/// u(i,j) u(k,l) = [j = k] u(i,l).
fn check_relations(
    group: &FiniteGroup,
    identity: &GroupAlgebraElement,
    units: &[Vec<GroupAlgebraElement>],
) -> (usize, usize, Vec<String>) {
    let n = units.len();
    let mut rec = Recorder::new();

    rec.check(!identity.is_zero(), || {
        String::from("identity element is zero")
    });
    rec.check(identity.mul(group, identity) == *identity, || {
        String::from("identity element is not idempotent")
    });

    for (i, row) in units.iter().enumerate() {
        for (j, u) in row.iter().enumerate() {
            rec.check(!u.is_zero(), || format!("unit ({i},{j}) is zero"));
        }
    }

    let mut diag = GroupAlgebraElement::zero();
    for (i, row) in units.iter().enumerate() {
        diag = diag.add(&row[i]);
    }
    rec.check(diag == *identity, || {
        String::from("diagonal sum differs from the identity")
    });

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let product = units[i][j].mul(group, &units[k][l]);
                    let ok = if j == k {
                        product == units[i][l]
                    } else {
                        product.is_zero()
                    };
                    rec.check(ok, || {
                        format!(
                            "product u({i},{j}) u({k},{l}) != {}",
                            if j == k {
                                format!("u({i},{l})")
                            } else {
                                String::from("0")
                            }
                        )
                    });
                }
            }
        }
    }
    rec.finish()
}
