//! Sensor placement for polynomial interpolation on [0, 1].
//!
//! Ranks 1001 grid points by pivoted QR on a monomial snapshot matrix, prints
//! the chosen abscissas, then sweeps reconstruction error for a kinked target
//! that lies outside the polynomial span.
//!
//! Run with `cargo run --example monomial`.

use ndarray::Array2;
use sparsor::io::generate::{equispaced_grid, vandermonde};
use sparsor::reconstruction::{Sspor, SsporConfig};

fn main() -> sparsor::Result<()> {
    // Rows are the monomials 1, x, ..., x^10 sampled on the grid.
    let snapshots = vandermonde(1001, 11)?;
    let mut model = Sspor::new(SsporConfig::default());
    model.fit(snapshots.view())?;

    let grid = equispaced_grid(1001);
    let sensors = model.selected_sensors()?;
    println!("selected {} locations:", sensors.len());
    for &i in sensors {
        println!("  index {i:>4}  x = {:.3}", grid[i]);
    }

    let target: Vec<f64> = grid.iter().map(|&x| (x * x - 0.5).abs()).collect();
    let test = Array2::from_shape_vec((1, grid.len()), target).expect("grid-shaped row");
    let range: Vec<usize> = (2..=11).collect();
    let curve = model.reconstruction_error(test.view(), &range)?;

    println!("\nreconstruction RMSE for |x^2 - 1/2|:");
    for (p, e) in range.iter().zip(&curve) {
        println!("  {p:>2} sensors  {e:.4e}");
    }
    Ok(())
}
