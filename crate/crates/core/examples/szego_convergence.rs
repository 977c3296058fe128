//! Normalized traces of matrix functions of Toeplitz restrictions approach torus
//! integrals of the symbol. The gap shrinks like 1/n for smooth symbols.

use gauss_ht::asymptotics::{QuadratureRule, szego_check};
use gauss_ht::lattice::DEFAULT_DENSE_CAP;
use gauss_ht::{SymbolKind, make_trig_symbol};
use faer::c64;

fn main() -> gauss_ht::Result<()> {
    // q(x) = 1.5 + cos x
    let q = make_trig_symbol(1, [(vec![0], c64::new(1.5, 0.0)), (vec![1], c64::new(0.5, 0.0))], 64)?;
    let rule = QuadratureRule::default_for(1)?;
    let log1p: &dyn Fn(f64) -> f64 = &f64::ln_1p;
    let rows = szego_check(&[q.clone()], &[log1p], SymbolKind::Q, &[16, 32, 64, 128, 256], &rule, DEFAULT_DENSE_CAP)?;
    println!("closed form log((2.5+sqrt(5.25))/2) = {:.9}", ((2.5 + 5.25f64.sqrt()) / 2.0).ln());
    println!("   n   (1/n) Tr log(I+Q)   gap");
    for r in &rows {
        println!("{:4}   {:.12}      {:.3e}", r.n, r.lhs, r.gap);
    }

    // Products of two functions of different restrictions, here Tr(Q A) with A = I + 2Q.
    let id: &dyn Fn(f64) -> f64 = &|x| x;
    let rows = szego_check(&[q.clone(), q], &[id, id], SymbolKind::A, &[8, 32, 128], &rule, DEFAULT_DENSE_CAP)?;
    println!("\n   n   (1/n) Tr(A A)       gap");
    for r in &rows {
        println!("{:4}   {:.12}      {:.3e}", r.n, r.lhs, r.gap);
    }
    Ok(())
}
