mod common;

use std::fs;

use common::{figure_csv, golden_dir, max_abs_column_deviation, FIGURES};

#[test]
fn oracle_sweeps_match_golden_files() {
    for (stem, extra, base) in FIGURES {
        let path = golden_dir().join(format!("{stem}.csv"));
        let stored =
            fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let fresh = figure_csv(extra, base, "oracle");
        assert!(
            fresh == stored,
            "{stem}: regenerated CSV differs from {}",
            path.display()
        );
    }
}

#[test]
fn closed_forms_reproduce_golden_files() {
    for (stem, extra, base) in FIGURES {
        let stored = fs::read_to_string(golden_dir().join(format!("{stem}.csv"))).unwrap();
        let closed = figure_csv(extra, base, "closed_form");
        let dev = max_abs_column_deviation(&stored, &closed);
        assert!(dev <= 1e-10, "{stem}: deviation {dev:e}");
    }
}

/// Rewrites the golden files from the oracle engine:
/// `cargo test -p cqed-cli --test golden -- --ignored`.
#[test]
#[ignore]
fn regenerate_golden_files() {
    fs::create_dir_all(golden_dir()).unwrap();
    for (stem, extra, base) in FIGURES {
        fs::write(
            golden_dir().join(format!("{stem}.csv")),
            figure_csv(extra, base, "oracle"),
        )
        .unwrap();
    }
}
