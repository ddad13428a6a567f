use std::io::Write;

fn main() {
    let (code, out, err) = thurston::cli::main_with(std::env::args_os());
    std::io::stdout().write_all(out.as_bytes()).expect("stdout");
    std::io::stderr().write_all(err.as_bytes()).expect("stderr");
    std::process::exit(code);
}
