//! A triangle of 1 kΩ resistors with 1 µF at each node, sampled with step
//! Δt. Forward Euler (I − γL) against the exact propagator exp(−γL), γ = Δt/C:
//! the gap shrinks like γ².

use diffactor::diffusion::{loglog_slope, rc_discretize, symmetric_norm, truncation_errors, RcNetwork};

fn main() -> diffactor::Result<()> {
    let net = RcNetwork::triangle(1.0, 1.0)?;
    println!("Laplacian:\n{}", net.laplacian());
    let step = rc_discretize(&net, 0.1)?;
    println!("exact propagator at dt = 0.1 ms:\n{}", step.exact);
    println!("norm of L: {:.4}", symmetric_norm(net.laplacian()));

    let gammas = [1e-1, 1e-2, 1e-3, 1e-4];
    let errors = truncation_errors(&net, &gammas)?;
    for (g, e) in gammas.iter().zip(&errors) {
        println!("gamma = {g:.0e}: error {e:.6e}");
    }
    println!("log-log slope {:.4}", loglog_slope(&gammas, &errors));
    Ok(())
}
