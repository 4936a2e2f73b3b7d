//! Dormand–Prince integration with dense output and event location.
use compacton::ode::{Dopri5, Termination};

fn main() -> compacton::error::Result<()> {
    // Pendulum released at 2 rad; stop at the first zero of the angle.
    let ode = Dopri5::new(1e-10, 1e-12);
    let traj = ode.integrate(
        |_, y: &[f64; 2]| [y[1], -y[0].sin()],
        0.0,
        [2.0, 0.0],
        100.0,
        |_, y| y[0],
        |_, _, _| None,
    )?;
    assert_eq!(traj.termination, Termination::Event);
    println!(
        "quarter period {:.12} after {} steps ({} rejected, {} rhs calls)",
        traj.t_final,
        traj.steps.len(),
        traj.rejected_steps,
        traj.rhs_evaluations
    );
    for t in [0.25, 0.5, 0.75].map(|s| s * traj.t_final) {
        println!("  theta({t:.4}) = {:+.12}", traj.eval(t)[0]);
    }
    Ok(())
}
