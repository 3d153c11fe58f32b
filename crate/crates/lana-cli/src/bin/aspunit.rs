fn main() {
    lana_cli::run(lana_cli::aspunit_main)
}
