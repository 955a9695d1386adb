int asag_placeholder_simfeat_test;
