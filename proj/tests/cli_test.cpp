int asag_placeholder_cli_test;
