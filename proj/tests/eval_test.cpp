int asag_placeholder_eval_test;
