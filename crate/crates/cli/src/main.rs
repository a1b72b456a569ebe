mod commands;
mod pretty;
mod request;

use std::io::Read;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use coapprox_core::Error;
use serde_json::{json, Value};

use commands::Failure;
use request::{Args, Request};

const EXIT_INVALID: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_DISCREPANCY: u8 = 3;

fn emit(value: &Value, pretty: bool) {
    if pretty {
        print!("{}", pretty::to_text(value));
    } else {
        println!("{value}");
    }
}

fn error_json(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

fn read_stdin() -> std::io::Result<String> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text)?;
    Ok(text)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit(&error_json("invalid_arguments", e.to_string().trim()), false);
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let pretty = args.pretty;
    let outcome = Request::from_args(&args, read_stdin).and_then(|req| commands::run(&req));
    match outcome {
        Ok(value) => {
            emit(&value, pretty);
            ExitCode::SUCCESS
        }
        Err(Failure::Discrepancy { mut response, issues }) => {
            response["discrepancies"] = json!(issues);
            emit(&response, pretty);
            ExitCode::from(EXIT_DISCREPANCY)
        }
        Err(Failure::Invalid(message)) => {
            emit(&error_json("invalid_request", &message), pretty);
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Core(e)) => {
            emit(&error_json(e.kind(), &e.to_string()), pretty);
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(EXIT_BUDGET),
                _ => ExitCode::from(EXIT_INVALID),
            }
        }
    }
}
