//! Emits the plot-ready CSV behind each published comparison figure into a
//! temp directory and prints a preview. The payloads are deterministic:
//! re-running produces identical bytes, so figures regenerate exactly.
//!
//! Run with: cargo run --example figure_data

use propint::cli::emit_figure_data;

const FIGURES: [&str; 5] =
    ["margins-vs-n", "coverage-vs-p", "me-vs-p", "coverage-vs-n", "me-vs-n"];

fn main() {
    let dir = std::env::temp_dir().join("propint_figures");
    std::fs::create_dir_all(&dir).unwrap();
    for figure in FIGURES {
        let payload = emit_figure_data(figure, 0.95).unwrap();
        let again = emit_figure_data(figure, 0.95).unwrap();
        assert_eq!(payload, again, "payloads are byte-identical across calls");
        let path = dir.join(format!("{figure}.csv"));
        std::fs::write(&path, &payload).unwrap();
        let mut lines = payload.lines();
        let header = lines.next().unwrap();
        println!(
            "{figure}: {} data rows -> {}",
            payload.lines().count() - 1,
            path.display()
        );
        println!("  {header}");
        for line in lines.take(3) {
            println!("  {line}");
        }
    }
    println!("\nsame figures are available from the CLI:");
    println!("  propint figure-data margins-vs-n --level 0.95 --output margins.csv");
}
