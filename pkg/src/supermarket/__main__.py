from supermarket.cli.main import main


raise SystemExit(main())
