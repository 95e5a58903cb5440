//! Extend a framed contact structure over M x [0, 1] between two Legendrian
//! line fields, check the bracket identities, and read off minimal twisting
//! numbers along a family.

use engel::calculus::SamplePlan;
use engel::expr::{parse_scalar_expr, Expr};
use engel::extension::{extend, extend_family, verify_extension_identities, ExtensionSpec, FamilySlice};
use engel::fixtures::standard_contact_frame;
use engel::invariants::minimal_twisting_number;
use engel::tolerance::Tolerances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let plan = SamplePlan::new(3, 10, 0);
    let tol = Tolerances::default();
    let frame = standard_contact_frame();
    let g = parse_scalar_expr("pi/2 + sin(x)/4", &["x", "y", "z"])?;

    for n in 0..=3 {
        let ext = extend(&ExtensionSpec::from_angle(&frame, g.clone(), n), &plan, &tol)?;
        let ids = verify_extension_identities(&ext, &plan, &tol)?;
        let mtw = minimal_twisting_number(ext.distribution(), &frame, &plan, &tol)?;
        println!(
            "n={n}: identities pass={} mtw={} min angle={:.4}",
            ids.passed, mtw.value, mtw.min_angle
        );
    }

    // n(s) steps from 0 to 1 as the total turning crosses pi.
    let slices: Vec<FamilySlice> = [(0.0, 0), (0.4, 0), (0.6, 1), (1.0, 1)]
        .into_iter()
        .map(|(s, n)| {
            let g = Expr::c(std::f64::consts::PI * (0.5 + s) - n as f64 * std::f64::consts::PI);
            FamilySlice {
                s,
                a: g.clone().cos(),
                b: g.clone().sin(),
                g: Some(g),
                n,
            }
        })
        .collect();
    for m in extend_family(&frame, &slices, &plan, &tol)? {
        println!("s={:.1}: mtw={}", m.s, m.mtw.value);
    }
    Ok(())
}
