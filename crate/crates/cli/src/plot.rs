use fburgers::report::fmt_f64;

/// Gnuplot script drawing `u(x, t)` at every sample time against the
/// rarefaction wave (dashed), reading the long-format trajectory CSV.
pub fn trajectory_script(csv: &str, times: &[f64]) -> String {
    let list: Vec<String> = times.iter().map(|&t| fmt_f64(t)).collect();
    let list = list.join(" ");
    let select = |column: usize| format!("(abs($1 - t) <= 1e-9 * (1 + abs(t)) ? ${column} : 1/0)");
    format!(
        "set terminal pngcairo size 1200,800\n\
         set output 'trajectory.png'\n\
         set datafile separator ','\n\
         set datafile commentschars '#'\n\
         set xlabel 'x'\n\
         set ylabel 'u'\n\
         set key outside right\n\
         times = \"{list}\"\n\
         plot for [s in times] t = real(s) '{csv}' using 2:{u} with lines lw 2 title sprintf('u, t = %g', real(s)), \\\n\
         \x20    for [s in times] t = real(s) '{csv}' using 2:{fan} with lines dt 2 lc rgb 'gray' notitle\n",
        u = select(3),
        fan = select(6),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn script_lists_every_time() {
        let script = trajectory_script("trajectory.csv", &[0.0, 2.5]);
        assert!(script.contains("0.0000000000000000e0 2.5000000000000000e0"));
        assert!(script.contains("'trajectory.csv'"));
        assert!(!script.contains("pause"));
    }
}
