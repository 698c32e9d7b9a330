fn main() { cy4vertex::cli::main(); }
