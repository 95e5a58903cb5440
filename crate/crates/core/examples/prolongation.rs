//! Prolong the contact structure of the 3-torus, compute its twisting
//! number and development angle, and recover the base plane field.

use engel::calculus::{random_points, SamplePlan};
use engel::fixtures::t3_contact_frame;
use engel::invariants::twisting_number;
use engel::prolongation::{deprolong, prolong, Development};
use engel::structures::check_engel_frame;
use engel::tolerance::Tolerances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let plan = SamplePlan::new(3, 10, 0);
    let tol = Tolerances::default();
    let frame = t3_contact_frame();
    let base = random_points(frame.chart(), 10, 0);

    for n in 1..=5 {
        let p = prolong(&frame, n)?;
        let engel = check_engel_frame(p.distribution(), &plan, &tol)?.passed;
        let tw = twisting_number(p.distribution(), &frame, &base, &plan, &tol)?;
        let profile = Development::new(p.distribution(), &frame, &plan, &tol)?.profile(&base[0])?;
        let (_, slope, residual) = profile.linear_fit();
        println!(
            "n={n}: engel={engel} tw={} slope={slope:.6} fit residual={residual:.1e}",
            tw.signed
        );
    }

    let p = prolong(&frame, 2)?;
    let alpha = deprolong(p.distribution(), 1.0, &plan, &tol)?;
    println!("deprolonged contact form: {alpha}");
    Ok(())
}
