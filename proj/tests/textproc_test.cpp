int asag_placeholder_textproc_test;
