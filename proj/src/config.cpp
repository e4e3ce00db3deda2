namespace cbdi {}
