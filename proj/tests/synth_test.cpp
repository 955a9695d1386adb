int asag_placeholder_synth_test;
