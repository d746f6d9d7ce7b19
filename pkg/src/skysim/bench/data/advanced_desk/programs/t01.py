aw.takeoff()
current_position = aw.get_drone_position()
aw.fly_to([current_position[0], current_position[1], current_position[2] - 5])
aw.set_yaw(90)
current_position = aw.get_drone_position()
aw.fly_to([current_position[0], current_position[1] + 6, current_position[2]])
current_position = aw.get_drone_position()
aw.fly_to([current_position[0], current_position[1] - 6, current_position[2]])
aw.land()
