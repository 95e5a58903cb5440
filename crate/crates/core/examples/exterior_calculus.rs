//! Exterior derivative, wedge products, Lie brackets, and the
//! finite-difference bracket oracle on R^4.

use engel::calculus::{exterior_derivative, fd_lie_bracket, lie_bracket, wedge, KForm, VectorField};
use engel::fixtures::r4_chart;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r4 = r4_chart();
    let alpha = KForm::parse(&r4, "dz - w*dx", None)?;
    let beta = KForm::parse(&r4, "dy - z*dx", None)?;
    let dalpha = exterior_derivative(&alpha)?;
    println!("d(alpha)              = {dalpha}");
    println!("alpha ^ beta ^ dalpha = {}", wedge(&wedge(&alpha, &beta)?, &dalpha)?);
    println!("d(d(alpha))           = {}", exterior_derivative(&dalpha)?);

    let x = VectorField::parse(&r4, &["0", "0", "0", "1"])?;
    let y = VectorField::parse(&r4, &["1", "z", "w", "0"])?;
    let xy = lie_bracket(&x, &y)?;
    let p = [0.1, 0.2, -0.3, 0.4];
    println!(
        "[X, Y]                = {:?}",
        xy.components().iter().map(ToString::to_string).collect::<Vec<_>>()
    );
    println!("symbolic at p         = {:?}", xy.eval_at(&p)?);
    println!("central difference    = {:?}", fd_lie_bracket(&x, &y, &p, 1e-3)?);
    Ok(())
}
