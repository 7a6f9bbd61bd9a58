//! Pixel selection for handwritten-digit classification.
//!
//! Fits SSPOC on the bundled 8x8 digit images, keeps ten pixels, and scores
//! the model on a held-out split measured only at those pixels.
//!
//! Run with `cargo run --example digits`.

use ndarray::Axis;
use sparsor::basis::BasisSpec;
use sparsor::classification::{Sspoc, SspocConfig};
use sparsor::io::dataset::load_labeled;
use sparsor::io::generate::train_test_split;

fn main() -> sparsor::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/digits.csv");
    let (x, y) = load_labeled(path)?;
    let (x_train, y_train, x_test, y_test) = train_test_split(&x, &y, 0.8, 7)?;

    // The default l1 penalty (0.1) shrinks this problem to zero sensors;
    // 0.005 keeps enough active rows to pick ten.
    let config = SspocConfig {
        basis: BasisSpec::svd(20),
        n_sensors: Some(10),
        l1_penalty: 0.005,
        ..SspocConfig::default()
    };
    let mut model = Sspoc::new(config);
    model.fit(x_train.view(), &y_train)?;

    let sensors = model.selected_sensors()?.to_vec();
    println!("selected pixels: {sensors:?}");

    let sub = x_test.select(Axis(1), &sensors);
    let preds = model.predict(sub.view())?;
    let hits = preds.iter().zip(&y_test).filter(|(a, b)| a == b).count();
    println!(
        "held-out accuracy with {} of 64 pixels: {:.4}",
        sensors.len(),
        hits as f64 / y_test.len() as f64
    );
    Ok(())
}
