//! Generated gnuplot scripts. The binary never links a plotting library;
//! figures are rendered from the emitted CSVs by the companion script.

/// A gnuplot script plotting the fidelity column of each named CSV.
/// `squared` can be flipped to 1 inside the script to plot F^2 instead.
pub fn fidelity_plot_script(title: &str, curves: &[(String, String)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {title}: fidelity vs collision count\n"));
    out.push_str("set datafile separator ','\n");
    out.push_str("set xlabel 'collisions n'\n");
    out.push_str("set ylabel 'fidelity'\n");
    out.push_str("set yrange [0:1.05]\n");
    out.push_str("set key bottom right\n");
    out.push_str("# flip to 1 to plot squared fidelity\n");
    out.push_str("squared = 0\n");
    out.push_str("f(x) = (squared != 0) ? x*x : x\n");
    out.push_str("plot \\\n");
    let lines: Vec<String> = curves
        .iter()
        .map(|(file, label)| {
            format!("  '{file}' skip 1 using 1:(f($2)) with lines title '{label}'")
        })
        .collect();
    out.push_str(&lines.join(", \\\n"));
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn script_lists_every_curve() {
        let script = fidelity_plot_script(
            "demo",
            &[("a.csv".into(), "first".into()), ("b.csv".into(), "second".into())],
        );
        assert!(script.contains("'a.csv' skip 1"));
        assert!(script.contains("title 'second'"));
        assert!(script.contains("squared = 0"));
    }
}
