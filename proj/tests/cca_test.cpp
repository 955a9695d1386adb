int asag_placeholder_cca_test;
