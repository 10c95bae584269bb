//! Single-generator series as evaluations of a divided-power series.

use seriesreal::events::{Generators, SimpleWord};
use seriesreal::realize::{differential_representation, verify_evaluation, DividedPowerSeries};
use seriesreal::scalar;
use seriesreal::series::SimpleSeries;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e = Generators::new(["e"])?;
    let p = SimpleSeries::tabulate(e, 6, |w: &SimpleWord| scalar::factorial(w.len() as u32));
    let f = differential_representation(&p, 6)?;
    for (alpha, d) in f.iter() {
        println!("d_{:?} = {}", alpha, scalar::format(d));
    }
    let report = verify_evaluation(&f, &p, 6)?;
    println!("checked {} exponents, passed: {}", report.checked, report.passed());

    // Leibniz rule on two small two-variable elements.
    let x = DividedPowerSeries::from_coefficients(2, 3, [(vec![1, 0], scalar::one()), (vec![0, 2], scalar::int(3))])?;
    let y = DividedPowerSeries::from_coefficients(2, 3, [(vec![1, 1], scalar::ratio(1, 2))])?;
    let lhs = x.mul(&y).derivative(0);
    let rhs = x.derivative(0).mul(&y).add(&x.mul(&y.derivative(0)));
    println!("d/dx0 (xy) = x' y + x y': {}", lhs == rhs);
    Ok(())
}
