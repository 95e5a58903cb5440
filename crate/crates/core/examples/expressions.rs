//! Parse a scalar expression, differentiate it, simplify, and evaluate.

use engel::expr::{parse_scalar_expr, partial_derivative, simplify, VarBinding};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e = parse_scalar_expr("cos(n*theta/2)*z + x^2*exp(sin(y))", &["x", "y", "z", "theta", "n"])?;
    let at = VarBinding::new()
        .with("x", 0.5)
        .with("y", -0.2)
        .with("z", 1.0)
        .with("theta", 0.3)
        .with("n", 3.0);
    println!("e          = {e}");
    for var in ["x", "theta"] {
        let d = simplify(&partial_derivative(&e, var));
        println!("d/d{var:<6} = {d}  (= {:.6} at the sample point)", d.evaluate(&at)?);
    }
    println!("e at point = {:.6}", e.evaluate(&at)?);
    Ok(())
}
