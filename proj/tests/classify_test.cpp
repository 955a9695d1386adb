int asag_placeholder_classify_test;
