// temporary debug: reproduce QR stall
use ndarray::Array2;
use num_complex::Complex64;
use btspec::{toeplitz_matrix, StandardSymbol, SymbolExpr};

fn main() {
    let w1 = 0.1932849504881723;
    let w2 = 1.8053843300757004;
    let k = 7u32;
    let expr = SymbolExpr::named(StandardSymbol::X3)
        .scaled(Complex64::new(w1, 0.0))
        .add(&SymbolExpr::named(StandardSymbol::X1Squared).scaled(Complex64::new(w2, 0.0)));
    let m = toeplitz_matrix(&expr, k).unwrap();
    println!("matrix built, hermitian defect {:e}", m.hermitian_defect());
    match btspec::eigenvalues_of(m.entries().view()) {
        Ok(e) => println!("eig ok: {e:?}"),
        Err(e) => println!("ERR {e}"),
    }
}
