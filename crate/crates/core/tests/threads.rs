#![cfg(feature = "parallel")]

use kreisslab_core::decomp::{self, DecompConfig, Side};
use kreisslab_core::fourier::{self, RieszConfig};
use kreisslab_core::verify;

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let run = || {
        let cfg = DecompConfig { max_support: 8, trials: 200, seed: 5, ..Default::default() };
        let d = decomp::estimate_constant(3.0, 2.0, 2.0, Side::Upper, 0.0, &cfg).unwrap();
        let r = fourier::riesz_norm_lower_bound(3.0, 2, 2.0, &RieszConfig { trials: 32, seed: 5, ..Default::default() }).unwrap();
        let s = verify::sweep(2, 300).unwrap();
        (d, r, s)
    };
    let one = in_pool(1, run);
    let many = in_pool(4, run);
    assert_eq!(one, many);
}
