use hetsim_core::fock::{
    build_operators, build_squeezed_coherent, build_squeezed_coherent_expm, coherent_vector, expm,
    FockMatrix, FockVector,
};
use hetsim_core::{gamma_from_squeeze, SqueezeParam, C64};

fn main() {
    for &(rho, cutoff) in &[(0.5, 60), (0.5, 80), (1.5, 230)] {
        let xi = SqueezeParam::new(rho, 0.0).unwrap();
        let alpha = C64::new(0.7, 0.0);
        let a = build_squeezed_coherent(&xi, alpha, cutoff).unwrap();
        let b = build_squeezed_coherent_expm(&xi, alpha, cutoff).unwrap();
        let d = a.sub(&b);
        // profile of |diff| by block of 10
        print!("rho={rho} cutoff={cutoff} total={:.3e} blocks:", d.norm());
        for blk in 0..=(cutoff / 20) {
            let lo = blk * 20;
            let hi = ((blk + 1) * 20).min(cutoff + 1);
            let n: f64 = d.amplitudes()[lo..hi]
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt();
            print!(" [{lo}..{hi}):{n:.1e}");
        }
        println!();
    }

    // Bogoliubov residual per test vector at cutoff 60
    let cutoff = 60;
    let xi = SqueezeParam::new(0.5, 0.0).unwrap();
    let (a_op, a_dag, _) = build_operators(cutoff, 1.0);
    let a2 = a_op.matmul(&a_op);
    let adag2 = a_dag.matmul(&a_dag);
    let gen = a2
        .scale(xi.xi().conj() * 0.5)
        .sub(&adag2.scale(xi.xi() * 0.5));
    let s = expm(&gen);
    let s_dag = s.dagger();
    let g = gamma_from_squeeze(&xi);
    for n in [0usize, 3, 6] {
        let v = FockVector::basis_state(cutoff, n);
        let lhs = s_dag.matvec(&FockMatrix::matvec(&a_op, &s.matvec(v.amplitudes())));
        let rhs = {
            let mut lo = hetsim_core::fock::lower(&v).scale(C64::new(g.gamma1(), 0.0));
            let hi = hetsim_core::fock::raise(&v).scale(g.gamma2());
            lo = lo.sub(&hi);
            lo
        };
        let diff: Vec<C64> = lhs
            .iter()
            .zip(rhs.amplitudes())
            .map(|(x, y)| x - y)
            .collect();
        print!("basis {n}: blocks");
        for blk in 0..=3 {
            let lo = blk * 15;
            let hi = ((blk + 1) * 15).min(cutoff + 1);
            let nn: f64 = diff[lo..hi].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            print!(" [{lo}..{hi}):{nn:.1e}");
        }
        println!();
    }
    // eigen identity residual profile
    let u = build_squeezed_coherent(&xi, C64::new(0.7, 0.0), cutoff).unwrap();
    let lhs = s.matvec(&FockMatrix::matvec(&a_op, &s_dag.matvec(u.amplitudes())));
    let diff: Vec<C64> = lhs
        .iter()
        .zip(u.amplitudes())
        .map(|(x, y)| x - C64::new(0.7, 0.0) * y)
        .collect();
    print!("eigen:   blocks");
    for blk in 0..=3 {
        let lo = blk * 15;
        let hi = ((blk + 1) * 15).min(cutoff + 1);
        let nn: f64 = diff[lo..hi].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        print!(" [{lo}..{hi}):{nn:.1e}");
    }
    println!();
    // coherent tail scale
    let c = coherent_vector(C64::new(0.7, 0.0), cutoff);
    println!("coherent(0.7) amp[40] = {:.2e}", c.amplitudes()[40].norm());
}
