use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &str) {
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(hes::hes)(py);
        let globals = PyDict::new(py);
        globals.set_item("hes", module).unwrap();
        let code = CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn states_and_entropy() {
    run(r#"
phi = hes.hes_state("psi+", 1.0)
assert phi.dims == [2, 18]
assert abs(phi.norm - 1.0) < 1e-12
assert abs(hes.entanglement_entropy(phi) - 1.0) < 1e-10
assert abs(hes.entanglement_entropy(hes.parity_bell_state("φ̃⁻", 0.5, 1.0)) - 1.0) < 1e-10
assert len(hes.spin_bell_state("Φ⁺")) == 4
"#);
}

#[test]
fn chsh_and_k() {
    run(r#"
a = hes.analytic_optimum(0.0)
assert abs(a.value - hes.CIRELSON_BOUND) < 1e-12
st = hes.hes_state("phi-", 2.0)
assert abs(hes.chsh_value(st, hes.analytic_optimum(2.0, "phi-").angles) - 2.78007875275185464) < 1e-10
assert hes.optimize_chsh(st, restarts=4, seed=1).value > 2.0
assert abs(hes.k_series(0.5) - hes.k_matrix(0.5, 12)) < 1e-10
"#);
}

#[test]
fn protocols_and_errors() {
    run(r#"
r = hes.teleport_spin(0.6, 0.8j, channel="phi-", z=0.5, seed=2)
assert abs(r.fidelity - 1.0) < 1e-10 and r.outcome in ("phi_plus", "phi_minus", "psi_plus", "psi_minus")
s = hes.swap_entanglement(0.5, 1.5, seed=0)
assert abs(s.entropy - 1.0) < 1e-10
try:
    hes.teleport_spin(1.0, 1.0)
    raise SystemExit("unnormalized input accepted")
except ValueError:
    pass
"#);
}
