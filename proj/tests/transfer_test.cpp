int asag_placeholder_transfer_test;
