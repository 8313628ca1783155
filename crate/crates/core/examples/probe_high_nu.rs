use annulus_harmonics::cross::AnnulusGeometry;
use annulus_harmonics::special::Order;
use annulus_harmonics::zeros::rho_zeros;

fn main() {
    let mut worst = 0.0f64;
    let mut fails = 0u32;
    for &b in &[1.2f64, 2.0, 5.0] {
        let g = AnnulusGeometry::new(b, 3).unwrap();
        for n in 20..=125u32 {
            let nu = Order::new(f64::from(n)).unwrap();
            match rho_zeros(nu, &g, 20) {
                Ok(table) => {
                    let w = table
                        .zeros()
                        .iter()
                        .map(|z| z.residual / z.residual_allowance())
                        .fold(0.0f64, f64::max);
                    worst = worst.max(w);
                }
                Err(e) => {
                    fails += 1;
                    println!("nu={n} b={b}: FAIL {e}");
                }
            }
        }
    }
    println!("failures: {fails}, worst surviving ratio: {worst:.3}");
}
