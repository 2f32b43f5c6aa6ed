use hetsim_core::fock::{build_operators, build_squeezed_coherent, expm, FockMatrix, FockVector};
use hetsim_core::{gamma_from_squeeze, SqueezeParam, C64};

fn squeeze_block(xi: &SqueezeParam, cutoff: usize, pad: usize) -> FockMatrix {
    let padded = cutoff + pad;
    let (a, a_dag, _) = build_operators(padded, 1.0);
    let gen = a
        .matmul(&a)
        .scale(xi.xi().conj() * 0.5)
        .sub(&a_dag.matmul(&a_dag).scale(xi.xi() * 0.5));
    let s = expm(&gen);
    let mut out = FockMatrix::zeros(cutoff + 1);
    for i in 0..=cutoff {
        for j in 0..=cutoff {
            out[(i, j)] = s[(i, j)];
        }
    }
    out
}

fn main() {
    let cutoff = 60usize;
    let xi = SqueezeParam::new(0.5, 0.0).unwrap();
    let g = gamma_from_squeeze(&xi);
    let (a_op, _, _) = build_operators(cutoff, 1.0);
    for &pad in &[0usize, 46, 120] {
        let s = squeeze_block(&xi, cutoff, pad);
        let s_dag = s.dagger();
        print!("pad={pad}:");
        for n in [0usize, 3, 6] {
            let v = FockVector::basis_state(cutoff, n);
            let lhs = s_dag.matvec(&FockMatrix::matvec(&a_op, &s.matvec(v.amplitudes())));
            let rhs = hetsim_core::fock::lower(&v)
                .scale(C64::new(g.gamma1(), 0.0))
                .sub(&hetsim_core::fock::raise(&v).scale(g.gamma2()));
            let diff: Vec<C64> = lhs
                .iter()
                .zip(rhs.amplitudes())
                .map(|(x, y)| x - y)
                .collect();
            let keep = diff.len() - (diff.len() / 4).max(2);
            let head: f64 = diff[..keep].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let full: f64 = diff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            print!("  |{n}>: head={head:.1e} full={full:.1e}");
        }
        // eigen part
        let u = build_squeezed_coherent(&xi, C64::new(0.7, 0.0), cutoff).unwrap();
        let lhs = s.matvec(&FockMatrix::matvec(&a_op, &s_dag.matvec(u.amplitudes())));
        let diff: Vec<C64> = lhs
            .iter()
            .zip(u.amplitudes())
            .map(|(x, y)| x - C64::new(0.7, 0.0) * y)
            .collect();
        let keep = diff.len() - (diff.len() / 4).max(2);
        let head: f64 = diff[..keep].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        println!("  eigen head={head:.1e}");
    }

    // How fat is the tail of S|6> really? Build squeezed number state via
    // large-cutoff block and report amplitude profile.
    let big = 240;
    let s = squeeze_block(&xi, big, 120);
    let v = FockVector::basis_state(big, 6);
    let sv = s.matvec(v.amplitudes());
    print!("S|6> amplitudes:");
    for &n in &[20usize, 40, 50, 58, 60, 80] {
        print!(" [{n}]={:.1e}", sv[n].norm());
    }
    println!();
}
