//! A vanishing minority (share D sqrt(a)) that connects almost exclusively to
//! the majority: uniform and degree sampling barely see it, while walk-based
//! schemes keep it visible.

use attrinet::theory;

fn main() -> attrinet::Result<()> {
    let d = 1.0;
    println!(
        "{:>8} {:>9} {:>9} {:>9} {:>9} {:>9} {:>10}",
        "a", "uniform", "degree", "in-deg", "pagerank", "walk(1)", "stationary"
    );
    for a in [1e-2, 1e-3, 1e-4, 1e-5] {
        let r = theory::rare_minority(a, d, 0.85, 1)?;
        println!(
            "{a:>8.0e} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>10.5}",
            r.exact_uniform,
            r.exact_degree,
            r.exact_in_degree,
            r.exact_pagerank,
            r.exact_fixed_walk,
            r.exact_stationary
        );
    }
    let r = theory::rare_minority(1e-4, d, 0.85, 1)?;
    println!("\nsmall-a expansions at a=1e-4 (first-order in sqrt(a)):");
    println!("  uniform            ~ {:.5}", r.asym_uniform);
    println!("  degree             ~ {:.5}", r.asym_degree);
    println!("  in-deg             ~ {:.5}", r.asym_in_degree);
    println!("  long-walk limit    ~ {:.5}", r.asym_walk_limit);
    Ok(())
}
