#[allow(dead_code)]
#[path = "../examples/frame_bounds.rs"]
mod frame_bounds;

#[test]
fn frame_bounds_example_runs() {
    frame_bounds::run().expect("frame_bounds example should run");
}

#[allow(dead_code)]
#[path = "../examples/multiplier_norm.rs"]
mod multiplier_norm;

#[test]
fn multiplier_norm_example_runs() {
    multiplier_norm::run().expect("multiplier_norm example should run");
}

#[allow(dead_code)]
#[path = "../examples/rescale_schauder.rs"]
mod rescale_schauder;

#[test]
fn rescale_schauder_example_runs() {
    rescale_schauder::run().expect("rescale_schauder example should run");
}

#[allow(dead_code)]
#[path = "../examples/dilation.rs"]
mod dilation;

#[test]
fn dilation_example_runs() {
    dilation::run().expect("dilation example should run");
}

#[allow(dead_code)]
#[path = "../examples/khintchine.rs"]
mod khintchine;

#[test]
fn khintchine_example_runs() {
    khintchine::run().expect("khintchine example should run");
}

#[allow(dead_code)]
#[path = "../examples/proof_chain.rs"]
mod proof_chain;

#[test]
fn proof_chain_example_runs() {
    proof_chain::run().expect("proof_chain example should run");
}

#[allow(dead_code)]
#[path = "../examples/ratio_experiment.rs"]
mod ratio_experiment;

#[test]
fn ratio_experiment_example_runs() {
    ratio_experiment::run().expect("ratio_experiment example should run");
}

#[allow(dead_code)]
#[path = "../examples/instance_files.rs"]
mod instance_files;

#[test]
fn instance_files_example_runs() {
    instance_files::run().expect("instance_files example should run");
}
