//! Verify the standard Engel structure as a pair of 1-forms and as a frame,
//! and recover the characteristic line field of its even-contact structure.

use engel::calculus::{KForm, SamplePlan};
use engel::fixtures::{r4_chart, standard_engel_frame, standard_engel_pair};
use engel::structures::{characteristic_vector_field, check_engel_frame, check_engel_pair, check_engel_pair_auto};
use engel::tolerance::Tolerances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let plan = SamplePlan::new(5, 200, 0);
    let tol = Tolerances::default();

    let pair = standard_engel_pair();
    let report = check_engel_pair(&pair, &plan, &tol)?;
    for c in &report.checks {
        println!(
            "{:<18} passed={} min={:.3} max={:.3}",
            c.name,
            c.passed,
            c.min(),
            c.max()
        );
    }
    let auto = check_engel_pair_auto(&pair.swapped(), &plan, &tol)?;
    println!("swapped pair satisfied by: {:?}", auto.satisfied_by);

    let frame = check_engel_frame(&standard_engel_frame(), &plan, &tol)?;
    println!("kernel frame passes growth checks: {}", frame.passed);

    let r4 = r4_chart();
    let omega = KForm::parse(&r4, "dx*dy*dz*dw", None)?;
    let x0 = characteristic_vector_field(&pair.beta, &omega, &plan, &tol)?;
    println!(
        "characteristic field of beta: {:?}",
        x0.components().iter().map(ToString::to_string).collect::<Vec<_>>()
    );
    Ok(())
}
