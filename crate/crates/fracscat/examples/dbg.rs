use fracscat::spectral::*;
use num_complex::Complex64;
fn main() {
    let grid = PeriodicGrid::new(1, 2048, 256.0).unwrap();
    let mut hat = vec![Complex64::ZERO; grid.len()];
    for (i, v) in hat.iter_mut().enumerate() {
        let xi = grid.xi_norm(i);
        if (0.5..8.0).contains(&xi) {
            *v = Complex64::new((-(xi - 3.0) * (xi - 3.0)).exp(), 0.0);
        }
    }
    let f = grid.inverse(&hat);
    // where does f live?
    let mut best = (0.0, 0.0);
    for i in 0..grid.len() {
        if f[i].norm() > best.1 { best = (grid.coords(i)[0], f[i].norm()); }
    }
    println!("peak |f| = {:.4} at x = {:.3}", best.1, best.0);
    for x_probe in [0.0, 1.0, 3.0, 10.0, 60.0, 100.0, 127.0] {
        let i = ((x_probe + 128.0) / grid.spacing()) as usize;
        println!("f({:.1}) = {:.3e}", grid.coords(i)[0], f[i].norm());
    }
    let (fj, rep) = restricted_projection(&grid, &f, 6).unwrap();
    println!("err = {:.4e}, majorants = {:?}, norm = {:.4}", rep.err_l2, rep.majorants, grid.l2_norm(&f));
    let mut best2 = (0.0, 0.0);
    for i in 0..grid.len() {
        if fj[i].norm() > best2.1 { best2 = (grid.coords(i)[0], fj[i].norm()); }
    }
    println!("peak |fj| = {:.4} at x = {:.3}", best2.1, best2.0);
}
