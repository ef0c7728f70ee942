use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<F: FnOnce(Python<'_>, &Bound<'_, PyDict>)>(f: F) {
    Python::initialize();
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(pyfanochain::pyfanochain)(py);
        let globals = PyDict::new(py);
        globals.set_item("fc", module).unwrap();
        f(py, &globals);
    });
}

fn run(py: Python<'_>, globals: &Bound<'_, PyDict>, code: &str) {
    let code = std::ffi::CString::new(code).unwrap();
    if let Err(e) = py.run(&code, Some(globals), None) {
        e.display(py);
        panic!("python snippet failed");
    }
}

#[test]
fn states_and_spectrum_from_python() {
    with_module(|py, g| {
        run(
            py,
            g,
            r#"
m = fc.ChainModel.semi_infinite(4, -0.5, 0.2)
states = fc.discrete_states(m)
assert len(states) == 5
res = [s for s in states if s.class_ == "resonance"]
assert abs(res[0].z - complex(-0.570439, -0.041146)) < 1e-6
result = fc.decompose(m, [-0.5, 0.0, 0.5])
assert len(result["resonances"]) == 3
assert abs(result["resonances"][0]["q"] - 3.313) < 0.02
"#,
        );
    });
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(|py, g| {
        run(
            py,
            g,
            r#"
try:
    fc.ChainModel.semi_infinite(0, 0.0, 0.2)
    raise AssertionError("accepted")
except ValueError:
    pass
try:
    fc.self_energy(fc.ChainModel.infinite(0.0, 0.2), 0.2, "III")
    raise AssertionError("accepted")
except ValueError:
    pass
try:
    fc.find_ep(fc.ChainModel.semi_infinite(4, 0.0, 0.2), 0.3, 2.0, 3 - 0.5j, 1e-14)
    raise AssertionError("converged")
except RuntimeError:
    pass
"#,
        );
    });
}

#[test]
fn exceptional_point_from_python() {
    with_module(|py, g| {
        run(
            py,
            g,
            r#"
m = fc.ChainModel.semi_infinite(4, 0.0, 0.2)
ep = fc.find_ep(m, 0.17, -0.4, -0.41 - 0.15j)
assert abs(ep.g - 0.1728448) < 1e-6 and abs(ep.e_d + 0.3981970) < 1e-6
paths = fc.trace(m, [-0.2, -0.1, 0.0], "ed")
assert any(p[2] for p in paths["ii"] + paths["i"] + paths["iii"])
"#,
        );
    });
}
