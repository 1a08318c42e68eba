//! Serves a builtin classifier over the line protocol on stdin/stdout.
//!
//! `tcc-oracle <name> <b0,b1,..>`, e.g. `tcc-oracle sig-m 4,4`.

use std::io::{stdin, stdout};
use std::process::ExitCode;

use tcc_core::oracle::{serve, BuiltinKind, BuiltinOracle};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [name, bounds] = args.as_slice() else {
        eprintln!("usage: tcc-oracle <constant|sig-k|sig-n|sig-m|sig-sum|random:SEED> <b0,b1,..>");
        return ExitCode::from(2);
    };
    let Some(kind) = BuiltinKind::parse(name) else {
        eprintln!("tcc-oracle: unknown classifier {name:?}");
        return ExitCode::from(2);
    };
    let bounds: Result<Vec<usize>, _> = bounds.split(',').map(|b| b.trim().parse()).collect();
    let oracle = bounds
        .map_err(|e| e.to_string())
        .and_then(|b| BuiltinOracle::new(kind, b).map_err(|e| e.to_string()));
    let mut oracle = match oracle {
        Ok(o) => o,
        Err(e) => {
            eprintln!("tcc-oracle: {e}");
            return ExitCode::from(2);
        }
    };
    match serve(&mut oracle, stdin().lock(), stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tcc-oracle: {e}");
            ExitCode::from(3)
        }
    }
}
